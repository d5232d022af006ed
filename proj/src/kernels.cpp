#include "plab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace plab {

namespace {

double bump_leg(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

PlateauProfile::PlateauProfile(double lo, double hi) : lo_(lo), hi_(hi) {
  require(lo > 0.0 && hi > lo, errc::parameter,
          "PlateauProfile needs 0 < lo < hi");
}

double PlateauProfile::operator()(double r) const {
  if (r <= lo_) return 1.0;
  if (r >= hi_) return 0.0;
  const double t = (hi_ - r) / (hi_ - lo_);
  const double b = bump_leg(t);
  return b / (b + bump_leg(1.0 - t));
}

// --- ConvolutionSystem ------------------------------------------------------

std::vector<GridFunction> ConvolutionSystem::convolve_all(
    const GridFunction& f) const {
  require(same_box(f.box, box()), errc::parameter,
          "convolve_all grid mismatch");
  const Eigen::ArrayXcd spec = dft_forward(f);
  std::vector<GridFunction> out;
  out.reserve(window().count());
  for (int j = window().j_min; j <= window().j_max; ++j)
    out.push_back(convolve_spectrum(spec, j));
  return out;
}

// --- BandSystem -------------------------------------------------------------

BandSystem build_band_system(const BoxDomain& box, const ScaleWindow& window,
                             double lo, double hi, bool homogeneous) {
  require(lo > 0.0 && hi > lo && hi <= 2.0 * lo, errc::parameter,
          "band system needs 0 < lo < hi <= 2*lo");
  require(window.j_max + 1 <= box.max_level(), errc::resolution,
          "band system window exceeds the grid band margin");
  require(homogeneous || window.j_min == 0, errc::parameter,
          "inhomogeneous band system must start at level 0");
  require(hi * std::exp2(window.j_max) <= M_PI * std::exp2(box.max_level()),
          errc::resolution, "finest band exceeds the grid Nyquist radius");
  BandSystem sys;
  sys.box_ = box;
  sys.window_ = window;
  sys.plateau_ = PlateauProfile(lo, hi);
  sys.homogeneous_ = homogeneous;
  sys.symbols_.reserve(window.count());
  const std::int64_t bins = box.total();
  for (int j = window.j_min; j <= window.j_max; ++j) {
    Eigen::ArrayXd sym(bins);
    for (std::int64_t m = 0; m < bins; ++m) {
      auto xi = frequency_point(box, m);
      const double r = std::hypot(xi[0], xi[1]);
      sym[m] = sys.symbol(j, r);
    }
    sys.symbols_.push_back(std::move(sym));
  }
  return sys;
}

double BandSystem::symbol(int j, double r) const {
  if (!homogeneous_ && j == 0) return plateau_(r);
  const double rj = std::exp2(-j) * r;
  return plateau_(rj) - plateau_(2.0 * rj);
}

std::array<double, 2> BandSystem::support_radii(int j) const {
  if (!homogeneous_ && j == 0) return {0.0, plateau_.hi()};
  return {plateau_.lo() * std::exp2(j - 1), plateau_.hi() * std::exp2(j)};
}

GridFunction BandSystem::convolve_spectrum(const Eigen::ArrayXcd& spec,
                                           int j) const {
  require(j >= window_.j_min && j <= window_.j_max, errc::parameter,
          "band level outside the system window");
  Eigen::ArrayXcd filtered = spec * symbols_[j - window_.j_min];
  return dft_inverse(box_, filtered);
}

GridFunction BandSystem::convolve(const GridFunction& f, int j) const {
  require(same_box(f.box, box_), errc::parameter, "band_convolve grid mismatch");
  return convolve_spectrum(dft_forward(f), j);
}

GridFunction BandSystem::kernel(int j) const {
  require(j >= window_.j_min && j <= window_.j_max, errc::parameter,
          "band level outside the system window");
  // center phase: the returned kernel peaks at x = 0, not at the box corner
  Eigen::ArrayXcd spec =
      (symbols_[j - window_.j_min] * center_phase(box_)).cast<cplx>();
  GridFunction k = dft_inverse(box_, spec);
  k.values /= std::pow(box_.spacing(), box_.dim);
  return k;
}

// --- LocalMeanSystem --------------------------------------------------------

LocalMeanSystem build_local_mean_system(const BoxDomain& box,
                                        const ScaleWindow& window,
                                        int laplace_power) {
  require(laplace_power >= 1, errc::parameter,
          "local means need laplace_power >= 1");
  require(window.j_min == 0, errc::parameter,
          "local mean window must start at level 0");
  require(window.j_max + 1 <= box.max_level(), errc::resolution,
          "local mean window exceeds the grid band margin");
  require(box.half_width >= 2.0, errc::parameter,
          "local means need half_width >= 2 to hold the base support B(0,2)");

  LocalMeanSystem sys;
  sys.box_ = box;
  sys.window_ = window;
  sys.laplace_power_ = laplace_power;

  const PlateauProfile ramp(1.0, 2.0);
  const int m = laplace_power;
  const int n = box.samples;
  const double hpow = std::pow(box.spacing(), box.dim);
  const double inv_h2 = 1.0 / (box.spacing() * box.spacing());

  // Level j: sample the exactly dilated plateau 2^(jn) Psi(2^j x), then apply
  // the *discrete* Laplacian stencil m times on the fine lattice (scaled by
  // 2^(-2jm) so the continuum magnitude matches Laplacian^m Psi dilated).
  // The stencil form keeps the support exactly compact and annihilates
  // sampled polynomials of degree < 2m to roundoff at every level, which is
  // what the moment side of the kernel contract needs on a finite grid; its
  // symbol deviates from -|xi|^2 only by the usual O((2^j h)^2) lattice
  // correction, which preserves the annulus nonvanishing condition.
  for (int j = window.j_min; j <= window.j_max; ++j) {
    const double amp = std::pow(std::exp2(j), box.dim);
    GridFunction k = sample(box, [&](std::array<double, 2> x) {
      return cplx(amp * ramp(std::exp2(j) * std::hypot(x[0], x[1])), 0.0);
    });
    if (j > 0) {
      const double step_scale = inv_h2 * std::exp2(-2.0 * j);
      for (int it = 0; it < m; ++it) {
        GridFunction next(box);
        for (std::int64_t i = 0; i < box.total(); ++i) {
          auto idx = box.unflat(i);
          cplx acc = 0.0;
          for (int d = 0; d < box.dim; ++d) {
            auto up = idx, dn = idx;
            up[d] = (idx[d] + 1) % n;
            dn[d] = (idx[d] - 1 + n) % n;
            acc += k.values[box.flat(up[0], up[1])] - 2.0 * k.values[i] +
                   k.values[box.flat(dn[0], dn[1])];
          }
          next.values[i] = acc * step_scale;
        }
        k = std::move(next);
      }
    }
    sys.kernels_.push_back(k);
    // continuum transform phase: the kernels are centered at the origin
    sys.kernel_spectra_.push_back(dft_forward(k) * center_phase(box) * hpow);
  }
  return sys;
}

GridFunction LocalMeanSystem::convolve_spectrum(const Eigen::ArrayXcd& spec,
                                                int j) const {
  require(j >= window_.j_min && j <= window_.j_max, errc::parameter,
          "local mean level outside the system window");
  Eigen::ArrayXcd filtered = spec * kernel_spectra_[j - window_.j_min];
  return dft_inverse(box_, filtered);
}

GridFunction LocalMeanSystem::convolve(const GridFunction& f, int j) const {
  require(same_box(f.box, box_), errc::parameter,
          "local mean convolve grid mismatch");
  return convolve_spectrum(dft_forward(f), j);
}

GridFunction LocalMeanSystem::kernel(int j) const {
  require(j >= window_.j_min && j <= window_.j_max, errc::parameter,
          "local mean level outside the system window");
  return kernels_[j - window_.j_min];
}

GridFunction band_convolve(const GridFunction& f, const ConvolutionSystem& sys,
                           int j) {
  return sys.convolve(f, j);
}

// --- damped shifted supremum ------------------------------------------------

namespace {

struct BlockGrid {
  int block = 0;                       // samples per block side
  int nblocks = 0;                     // blocks per axis
  std::vector<double> bmax;            // per flat block id
  std::vector<int> order;              // block ids, bmax descending
};

BlockGrid build_blocks(const BoxDomain& box, const Eigen::ArrayXd& g) {
  BlockGrid bg;
  bg.block = box.dim == 1 ? 64 : 16;
  while (bg.block > box.samples) bg.block /= 2;
  bg.nblocks = box.samples / bg.block;
  const int total = box.dim == 1 ? bg.nblocks : bg.nblocks * bg.nblocks;
  bg.bmax.assign(total, 0.0);
  for (std::int64_t i = 0; i < g.size(); ++i) {
    auto idx = box.unflat(i);
    const int b0 = static_cast<int>(idx[0]) / bg.block;
    const int b1 = static_cast<int>(idx[1]) / bg.block;
    const int bid = box.dim == 1 ? b0 : b0 * bg.nblocks + b1;
    bg.bmax[bid] = std::max(bg.bmax[bid], g[i]);
  }
  bg.order.resize(total);
  std::iota(bg.order.begin(), bg.order.end(), 0);
  std::stable_sort(bg.order.begin(), bg.order.end(),
                   [&](int a, int b) { return bg.bmax[a] > bg.bmax[b]; });
  return bg;
}

// circular distance (in cells) from cell ix to the block range [lo, hi)
std::int64_t circular_range_dist(std::int64_t ix, std::int64_t lo,
                                 std::int64_t hi, std::int64_t n) {
  if (ix >= lo && ix < hi) return 0;
  const std::int64_t up = (lo - ix % n + n) % n;     // step upward to lo
  const std::int64_t down = (ix % n - (hi - 1) + n) % n;  // downward to hi-1
  return std::min(up, down);
}

std::int64_t circular_point_dist(std::int64_t a, std::int64_t b,
                                 std::int64_t n) {
  std::int64_t d = std::llabs(a - b) % n;
  return std::min(d, n - d);
}

}  // namespace

GridFunction damped_sup(const GridFunction& g, double scale, double a) {
  require(scale > 0.0, errc::parameter, "damped_sup scale must be positive");
  require(a >= 0.0, errc::parameter, "damped_sup exponent must be >= 0");
  const BoxDomain& box = g.box;
  const Eigen::ArrayXd mag = g.abs();
  const BlockGrid bg = build_blocks(box, mag);
  const double h = box.spacing();
  const int n = box.samples;
  GridFunction out(box);

  for (std::int64_t i = 0; i < box.total(); ++i) {
    auto idx = box.unflat(i);
    double best = 0.0;
    for (int bid : bg.order) {
      const double bm = bg.bmax[bid];
      if (bm <= best) break;  // blocks sorted: nothing further can win
      const int b0 = box.dim == 1 ? bid : bid / bg.nblocks;
      const int b1 = box.dim == 1 ? 0 : bid % bg.nblocks;
      const std::int64_t lo0 = std::int64_t{b0} * bg.block;
      const std::int64_t lo1 = std::int64_t{b1} * bg.block;
      double dmin = 0.0;
      {
        const std::int64_t d0 =
            circular_range_dist(idx[0], lo0, lo0 + bg.block, n);
        if (box.dim == 1) {
          dmin = h * static_cast<double>(d0);
        } else {
          const std::int64_t d1 =
              circular_range_dist(idx[1], lo1, lo1 + bg.block, n);
          dmin = h * std::hypot(static_cast<double>(d0),
                                static_cast<double>(d1));
        }
      }
      if (bm / std::pow(1.0 + scale * dmin, a) <= best) continue;
      const std::int64_t hi0 = std::min<std::int64_t>(lo0 + bg.block, n);
      const std::int64_t hi1 =
          box.dim == 1 ? 1 : std::min<std::int64_t>(lo1 + bg.block, n);
      for (std::int64_t z0 = lo0; z0 < hi0; ++z0) {
        const std::int64_t d0c = circular_point_dist(idx[0], z0, n);
        for (std::int64_t z1 = (box.dim == 1 ? 0 : lo1); z1 < hi1; ++z1) {
          double dist;
          if (box.dim == 1) {
            dist = h * static_cast<double>(d0c);
          } else {
            const std::int64_t d1c = circular_point_dist(idx[1], z1, n);
            dist = h * std::hypot(static_cast<double>(d0c),
                                  static_cast<double>(d1c));
          }
          const double cand =
              mag[box.flat(z0, z1)] / std::pow(1.0 + scale * dist, a);
          if (cand > best) best = cand;
        }
      }
    }
    out.values[i] = best;
  }
  return out;
}

GridFunction peetre_maximal(const GridFunction& f, const ConvolutionSystem& sys,
                            int j, double a) {
  return damped_sup(sys.convolve(f, j), std::exp2(j), a);
}

// --- maximal operators ------------------------------------------------------

namespace {

// circular windowed sums of one axis: out[i] = sum_{|t| <= w} in[(i+t) mod n]
void circular_box_sum_axis0(const Eigen::ArrayXd& in, Eigen::ArrayXd& out,
                            int n, int stride, int count, std::int64_t w) {
  // prefix over a doubled circular walk per line
  std::vector<double> pref;
  for (int line = 0; line < count; ++line) {
    const std::int64_t base = (stride == 1)
                                  ? static_cast<std::int64_t>(line) * n
                                  : line;
    const std::int64_t step = stride;
    const std::int64_t win = std::min<std::int64_t>(2 * w + 1, n);
    pref.assign(static_cast<size_t>(n) + 1, 0.0);
    for (int i = 0; i < n; ++i)
      pref[i + 1] = pref[i] + in[base + step * i];
    const double total = pref[n];
    for (int i = 0; i < n; ++i) {
      double s;
      if (win >= n) {
        s = total;
      } else {
        std::int64_t lo = i - w, hi = i + w;  // inclusive
        if (lo < 0) {
          s = (pref[hi + 1] - pref[0]) + (pref[n] - pref[lo + n]);
        } else if (hi >= n) {
          s = (pref[n] - pref[lo]) + (pref[hi - n + 1] - pref[0]);
        } else {
          s = pref[hi + 1] - pref[lo];
        }
      }
      out[base + step * i] = s;
    }
  }
}

std::vector<std::int64_t> window_ladder(int n) {
  std::vector<std::int64_t> ws;
  for (std::int64_t w = 1; w <= n / 2; w *= 2) {
    ws.push_back(w);
    const std::int64_t mid = w + w / 2;
    if (w > 1 && mid <= n / 2) ws.push_back(mid);
  }
  std::sort(ws.begin(), ws.end());
  ws.erase(std::unique(ws.begin(), ws.end()), ws.end());
  return ws;
}

}  // namespace

GridFunction hardy_littlewood_maximal(const GridFunction& f) {
  const BoxDomain& box = f.box;
  const int n = box.samples;
  const Eigen::ArrayXd mag = f.abs();
  GridFunction out(box);
  Eigen::ArrayXd best = Eigen::ArrayXd::Zero(box.total());
  Eigen::ArrayXd tmp(box.total()), tmp2(box.total());
  for (std::int64_t w : window_ladder(n)) {
    const double cells = static_cast<double>(std::min<std::int64_t>(2 * w + 1, n));
    if (box.dim == 1) {
      circular_box_sum_axis0(mag, tmp, n, 1, 1, w);
      best = best.max(tmp / cells);
    } else {
      // rows (axis 1 contiguous), then columns
      circular_box_sum_axis0(mag, tmp, n, 1, n, w);
      circular_box_sum_axis0(tmp, tmp2, n, n, n, w);
      best = best.max(tmp2 / (cells * cells));
    }
  }
  out.values = best.cast<cplx>();
  return out;
}

GridFunction windowed_maximal(const GridFunction& f, int nu, double r,
                              double lambda) {
  const BoxDomain& box = f.box;
  require(r > 0.0, errc::parameter, "windowed_maximal needs r > 0");
  require(lambda > box.dim, errc::hypothesis,
          "windowed_maximal tail must beat the dimension (lambda > n)");
  require(nu >= 0 && std::exp2(nu) <= 1.0 / box.spacing(), errc::resolution,
          "windowed_maximal level too fine for the grid");
  const double amp = std::pow(std::exp2(nu), box.dim);
  GridFunction eta = sample(box, [&](std::array<double, 2> x) {
    const double d = dist_periodic(box, x, {0.0, 0.0});
    return cplx(amp * std::pow(1.0 + std::exp2(nu) * d, -lambda), 0.0);
  });
  GridFunction powed(box);
  powed.values = f.abs().pow(r).cast<cplx>();
  GridFunction conv = convolve_periodic(powed, eta);
  GridFunction out(box);
  out.values = conv.values.real().max(0.0).pow(1.0 / r).cast<cplx>();
  return out;
}

GridFunction bessel_lift(const GridFunction& f, double s) {
  require(std::fabs(s) <= 300.0, errc::overflow,
          "bessel_lift exponent magnitude too large");
  return apply_symbol(f, [&](std::array<double, 2> xi) {
    const double r2 = xi[0] * xi[0] + xi[1] * xi[1];
    return cplx(std::pow(1.0 + r2, s / 2.0), 0.0);
  });
}

// --- bump pairing bound -----------------------------------------------------

PairingBound bump_pairing_bound(const GridFunction& coarse, int level_coarse,
                                std::array<double, 2> center_coarse,
                                const GridFunction& fine, int level_fine,
                                std::array<double, 2> center_fine, int L,
                                double M, double N) {
  const BoxDomain& box = coarse.box;
  require(same_box(box, fine.box), errc::parameter,
          "pairing kernels live on different grids");
  require(level_fine >= level_coarse, errc::parameter,
          "pairing needs the fine level >= the coarse level");
  require(L >= 1, errc::parameter, "pairing needs L >= 1");
  require(M > 0.0 && N - M - L - box.dim > 0.0, errc::hypothesis,
          "pairing tails need N > M + L + n");

  const double h = box.spacing();
  const double hpow = std::pow(h, box.dim);
  const double scale_f = std::exp2(level_fine);
  const double scale_c = std::exp2(level_coarse);
  PairingBound pb;

  // Moments of the fine kernel through order L-1, read off the frequency
  // side: the (b0,b1) moment about the center equals i^(b0+b1) times the
  // matching derivative of the recentered transform at frequency zero, which
  // we estimate by finite differences over the first bins.  Integrating
  // monomials directly across the torus would instead pick up the seam kink
  // of their periodization, which couples O(4^-level) leakage into a kernel
  // whose moments genuinely vanish.  Residuals are dimensionless (unit mass,
  // unit length 2^-level_fine); exact band kernels give exact zeros because
  // every stencil bin sits below the band floor.
  const double l1 = hpow * fine.values.abs().sum();
  require(l1 > 0.0, errc::parameter, "fine kernel is identically zero");
  Eigen::ArrayXcd spec = continuum_fourier(fine);
  for (std::int64_t i = 0; i < box.total(); ++i) {
    const auto xi = frequency_point(box, i);
    const double phase =
        xi[0] * center_fine[0] + (box.dim == 2 ? xi[1] * center_fine[1] : 0.0);
    spec[i] *= std::exp(cplx(0.0, phase));
  }
  const double delta = 2.0 * M_PI / box.period();  // frequency bin spacing
  const auto bin_at = [&](int m0, int m1) {
    const int n = box.samples;
    const std::int64_t i0 = (m0 % n + n) % n;
    const std::int64_t i1 = (m1 % n + n) % n;
    return spec[box.dim == 2 ? box.flat(i0, i1) : i0];
  };
  const auto choose = [](int n_, int k_) {
    double c = 1.0;
    for (int t = 0; t < k_; ++t) c = c * (n_ - t) / (t + 1);
    return c;
  };
  for (int btot = 0; btot <= L - 1; ++btot) {
    for (int b0 = btot; b0 >= 0; --b0) {
      const int b1 = btot - b0;
      if (box.dim == 1 && b1 > 0) continue;
      // b-th difference per axis on bins centered as evenly as possible
      cplx m = 0.0;
      for (int k0 = 0; k0 <= b0; ++k0) {
        const double w0 = (((b0 - k0) % 2) ? -1.0 : 1.0) * choose(b0, k0);
        for (int k1 = 0; k1 <= b1; ++k1) {
          const double w1 = (((b1 - k1) % 2) ? -1.0 : 1.0) * choose(b1, k1);
          m += w0 * w1 * bin_at(k0 - b0 / 2, k1 - b1 / 2);
        }
      }
      m /= std::pow(delta, btot);
      const double resid =
          std::abs(m) / (l1 * std::pow(1.0 / scale_f, btot));
      pb.moment_residual = std::max(pb.moment_residual, resid);
    }
  }
  require(pb.moment_residual <= 1e-5, errc::hypothesis,
          "fine kernel moments through L-1 do not vanish");

  // decay constant of the fine kernel
  for (std::int64_t i = 0; i < box.total(); ++i) {
    const double d = dist_periodic(box, box.point(i), center_fine);
    const double v = std::abs(fine.values[i]) *
                     std::pow(1.0 + scale_f * d, N) /
                     std::pow(scale_f, box.dim);
    pb.b_const = std::max(pb.b_const, v);
  }

  // top-order derivative constants of the coarse kernel (spectral derivatives)
  const double denom = std::pow(scale_c, box.dim + L);
  for (int a0 = L; a0 >= 0; --a0) {
    const int a1 = L - a0;
    if (box.dim == 1 && a1 > 0) continue;
    GridFunction da = apply_symbol(coarse, [&](std::array<double, 2> xi) {
      cplx v = std::pow(cplx(0.0, xi[0]), a0);
      if (box.dim == 2) v *= std::pow(cplx(0.0, xi[1]), a1);
      return v;
    });
    double aa = 0.0;
    for (std::int64_t i = 0; i < box.total(); ++i) {
      const double d = dist_periodic(box, box.point(i), center_coarse);
      aa = std::max(aa, std::abs(da.values[i]) *
                            std::pow(1.0 + scale_c * d, M) / denom);
    }
    pb.a_sum += aa / (factorial(a0) * factorial(a1));
  }

  pb.lhs = std::abs((coarse.values * fine.values).sum()) * hpow;

  const double omega = box.dim == 1 ? 2.0 : M_PI;
  const double sep = dist_periodic(box, center_coarse, center_fine);
  pb.rhs = pb.a_sum * ((N - M - L) / (N - M - L - box.dim)) * pb.b_const *
           omega * std::pow(scale_c, box.dim) *
           std::exp2(-static_cast<double>(level_fine - level_coarse) * L) *
           std::pow(1.0 + scale_c * sep, -M);
  return pb;
}

}  // namespace plab
