namespace plab { namespace { [[maybe_unused]] int stub_decompose = 0; } }
