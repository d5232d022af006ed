#include "plab/fft.hpp"

#include <unsupported/Eigen/FFT>

namespace plab {

namespace {

Eigen::FFT<double>& engine() {
  thread_local Eigen::FFT<double> fft;
  return fft;
}

// In-place 2-d transform of an N x N row-major flat array: rows, then columns.
void transform_2d(Eigen::ArrayXcd& data, int n, bool forward) {
  Eigen::VectorXcd buf_in(n), buf_out(n);
  auto& fft = engine();
  // rows (contiguous)
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) buf_in[c] = data[r * n + c];
    if (forward)
      fft.fwd(buf_out, buf_in);
    else
      fft.inv(buf_out, buf_in);
    for (int c = 0; c < n; ++c) data[r * n + c] = buf_out[c];
  }
  // columns (strided)
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) buf_in[r] = data[r * n + c];
    if (forward)
      fft.fwd(buf_out, buf_in);
    else
      fft.inv(buf_out, buf_in);
    for (int r = 0; r < n; ++r) data[r * n + c] = buf_out[r];
  }
}

}  // namespace

Eigen::ArrayXcd dft_forward(const GridFunction& f) {
  const int n = f.box.samples;
  Eigen::ArrayXcd out = f.values;
  if (f.box.dim == 1) {
    Eigen::VectorXcd in = out.matrix(), res;
    engine().fwd(res, in);
    out = res.array();
  } else {
    transform_2d(out, n, /*forward=*/true);
  }
  return out;
}

GridFunction dft_inverse(const BoxDomain& box,
                         const Eigen::ArrayXcd& spectrum) {
  require(spectrum.size() == box.total(), errc::parameter,
          "dft_inverse spectrum size mismatch");
  GridFunction f(box);
  if (box.dim == 1) {
    Eigen::VectorXcd in = spectrum.matrix(), res;
    engine().inv(res, in);
    f.values = res.array();
  } else {
    f.values = spectrum;
    transform_2d(f.values, box.samples, /*forward=*/false);
  }
  return f;
}

std::int64_t signed_bin(const BoxDomain& box, std::int64_t m) {
  return m < box.samples / 2 ? m : m - box.samples;
}

std::array<double, 2> frequency_point(const BoxDomain& box,
                                      std::int64_t flat) {
  const double unit = M_PI / box.half_width;
  auto idx = box.unflat(flat);
  std::array<double, 2> xi = {0.0, 0.0};
  for (int d = 0; d < box.dim; ++d)
    xi[d] = unit * static_cast<double>(signed_bin(box, idx[d]));
  return xi;
}

GridFunction apply_symbol(
    const GridFunction& f,
    const std::function<cplx(std::array<double, 2>)>& sigma) {
  Eigen::ArrayXcd spec = dft_forward(f);
  const std::int64_t n = spec.size();
  for (std::int64_t i = 0; i < n; ++i) spec[i] *= sigma(frequency_point(f.box, i));
  return dft_inverse(f.box, spec);
}

Eigen::ArrayXcd continuum_fourier(const GridFunction& f) {
  Eigen::ArrayXcd spec = dft_forward(f);
  const double hpow = std::pow(f.box.spacing(), f.box.dim);
  spec *= center_phase(f.box) * hpow;
  return spec;
}

Eigen::ArrayXd center_phase(const BoxDomain& box) {
  // e^{-i xi_m . (-L,...,-L)} = (-1)^(sum_d m_d) for even sample counts:
  // the phase that realigns spectra of data indexed from the box corner with
  // kernels centered at the origin.
  Eigen::ArrayXd sign(box.total());
  for (std::int64_t i = 0; i < box.total(); ++i) {
    auto idx = box.unflat(i);
    std::int64_t parity = 0;
    for (int d = 0; d < box.dim; ++d) parity += idx[d];
    sign[i] = (parity % 2 == 0) ? 1.0 : -1.0;
  }
  return sign;
}

GridFunction convolve_periodic(const GridFunction& f, const GridFunction& g) {
  require(same_box(f.box, g.box), errc::parameter,
          "convolve_periodic needs matching grids");
  Eigen::ArrayXcd sf = dft_forward(f);
  Eigen::ArrayXcd sg = dft_forward(g);
  sf *= sg * center_phase(f.box);
  GridFunction out = dft_inverse(f.box, sf);
  out.values *= std::pow(f.box.spacing(), f.box.dim);
  return out;
}

}  // namespace plab
