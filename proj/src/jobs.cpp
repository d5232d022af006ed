namespace plab { namespace { [[maybe_unused]] int stub_jobs = 0; } }
