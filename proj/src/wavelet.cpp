namespace plab { namespace { [[maybe_unused]] int stub_wavelet = 0; } }
