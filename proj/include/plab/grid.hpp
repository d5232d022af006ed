#pragma once

// Periodic sampling grids on centered boxes, dyadic cube bookkeeping, and
// quadrature helpers.  Everything downstream (convolution systems, space
// norms, decompositions) runs on these grids.
//
// Conventions, fixed once here:
//   * The domain is the box [-L, L)^n, n in {1, 2}, treated as a torus of
//     period 2L per axis.  L is a power of two so dyadic cube corners land
//     exactly on sample points.
//   * Each axis carries N equispaced samples (N a power of two), spacing
//     h = 2L / N, sample coordinates x_i = -L + h * i.
//   * 2-d data is flattened row-major: flat = i0 * N + i1, axis 0 slowest.
//   * Dyadic cube Q at level j with corner index k (one integer per axis)
//     is the half-open cube  prod_i [ k_i 2^-j, (k_i + 1) 2^-j ).
//     Larger j means finer cubes; negative j means cubes larger than unit.

#include <array>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "plab/errors.hpp"

namespace plab {

using cplx = std::complex<double>;

inline bool is_power_of_two(double v) {
  if (v <= 0.0) return false;
  int exp = 0;
  double mant = std::frexp(v, &exp);
  return mant == 0.5;
}

/// A centered periodic box [-L, L)^n with N samples per axis.
struct BoxDomain {
  int dim = 1;              // spatial dimension, 1 or 2
  double half_width = 1.0;  // L; power of two >= 1
  int samples = 0;          // N per axis; power of two >= 8

  double period() const { return 2.0 * half_width; }
  double spacing() const { return period() / samples; }
  /// Finest dyadic level whose cubes still contain at least one full
  /// spacing: 2^-max_level == spacing.
  int max_level() const {
    return static_cast<int>(std::lround(std::log2(samples / period())));
  }
  std::int64_t total() const {
    std::int64_t t = 1;
    for (int d = 0; d < dim; ++d) t *= samples;
    return t;
  }
  double coord(std::int64_t i) const { return -half_width + spacing() * i; }
  std::int64_t flat(std::int64_t i0, std::int64_t i1 = 0) const {
    return dim == 1 ? i0 : i0 * samples + i1;
  }
  std::array<std::int64_t, 2> unflat(std::int64_t f) const {
    if (dim == 1) return {f, 0};
    return {f / samples, f % samples};
  }
  std::array<double, 2> point(std::int64_t f) const {
    auto idx = unflat(f);
    return {coord(idx[0]), dim == 2 ? coord(idx[1]) : 0.0};
  }

  /// Validating factory; throws errc::parameter on bad shapes.
  static BoxDomain make(int dim, double half_width, int samples);
};

bool same_box(const BoxDomain& a, const BoxDomain& b);

/// Complex-valued samples over a BoxDomain.
struct GridFunction {
  BoxDomain box;
  Eigen::ArrayXcd values;  // size box.total(), row-major flattening

  GridFunction() = default;
  explicit GridFunction(const BoxDomain& b)
      : box(b), values(Eigen::ArrayXcd::Zero(b.total())) {}

  Eigen::ArrayXd abs() const { return values.abs(); }
};

/// Sample a callable f(x) -> complex over the grid.
GridFunction sample(const BoxDomain& box,
                    const std::function<cplx(std::array<double, 2>)>& f);

/// Minimal-image distance between two points of the torus [-L, L)^n.
double dist_periodic(const BoxDomain& box, const std::array<double, 2>& a,
                     const std::array<double, 2>& b);

/// Dyadic cube identifier: level plus integer corner per axis.
struct DyadicCube {
  int level = 0;
  std::array<std::int64_t, 2> k = {0, 0};
};

struct CubeGeometry {
  int level = 0;
  double side = 1.0;                       // 2^-level
  double volume = 1.0;                     // side^dim
  std::array<double, 2> corner = {0, 0};   // lower-left corner
  std::array<double, 2> center = {0, 0};
};

CubeGeometry cube_geometry(const DyadicCube& q, int dim);

/// Half-open per-axis sample-index ranges [lo, hi); empty when lo >= hi.
struct IndexBox {
  std::array<std::int64_t, 2> lo = {0, 0};
  std::array<std::int64_t, 2> hi = {0, 0};
  bool empty(int dim) const {
    for (int d = 0; d < dim; ++d)
      if (lo[d] >= hi[d]) return true;
    return false;
  }
  std::int64_t count(int dim) const {
    std::int64_t c = 1;
    for (int d = 0; d < dim; ++d) c *= std::max<std::int64_t>(0, hi[d] - lo[d]);
    return c;
  }
};

/// Samples of the box falling inside cube q.  Requires
/// q.level <= box.max_level() (errc::resolution otherwise); corners of such
/// cubes are exactly grid-aligned by the power-of-two conventions.
IndexBox cube_index_box(const BoxDomain& box, const DyadicCube& q);

/// All dyadic cubes at levels [level_min, level_max] intersecting the box,
/// in lexicographic (level, k0, k1) order.
std::vector<DyadicCube> enumerate_cubes(const BoxDomain& box, int level_min,
                                        int level_max);

/// Contiguous range of dyadic analysis levels.  For band-limited analysis the
/// finest level must keep a margin below Nyquist: j_max + 1 <= max_level.
struct ScaleWindow {
  int j_min = 0;
  int j_max = 0;
  int count() const { return j_max - j_min + 1; }
};

ScaleWindow make_scale_window(const BoxDomain& box, int j_min, int j_max);

/// Power mean ( |B cap grid|^-1 sum_{x in B} |f(x)|^u )^(1/u) over the
/// Euclidean ball B(center, radius) clipped to the box (no wraparound).
/// u = +infinity gives the max.  Throws errc::degenerate_ball when the ball
/// captures no samples, errc::parameter for u < smallest admissible.
double ball_average(const GridFunction& f, const std::array<double, 2>& center,
                    double radius, double u);

// --- serialization ---------------------------------------------------------

/// Binary grid file ("PLAB" magic, version, shape, interleaved re/im doubles).
void write_grid_file(const std::filesystem::path& path, const GridFunction& f);
GridFunction read_grid_file(const std::filesystem::path& path);

/// Plain CSV: one row per sample, columns x0[,x1],re,im.
void write_grid_csv(const std::filesystem::path& path, const GridFunction& f);

}  // namespace plab
