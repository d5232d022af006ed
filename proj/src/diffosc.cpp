namespace plab { namespace { [[maybe_unused]] int stub_diffosc = 0; } }
