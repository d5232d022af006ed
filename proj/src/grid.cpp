#include "plab/grid.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

namespace plab {

BoxDomain BoxDomain::make(int dim, double half_width, int samples) {
  require(dim == 1 || dim == 2, errc::parameter,
          "BoxDomain dim must be 1 or 2, got " + std::to_string(dim));
  require(is_power_of_two(half_width) && half_width >= 1.0, errc::parameter,
          "BoxDomain half_width must be a power of two >= 1, got " +
              std::to_string(half_width));
  require(samples >= 8 && (samples & (samples - 1)) == 0, errc::parameter,
          "BoxDomain samples must be a power of two >= 8, got " +
              std::to_string(samples));
  require(samples > 2.0 * half_width, errc::resolution,
          "BoxDomain needs spacing < 1 (samples > 2*half_width)");
  BoxDomain b;
  b.dim = dim;
  b.half_width = half_width;
  b.samples = samples;
  return b;
}

bool same_box(const BoxDomain& a, const BoxDomain& b) {
  return a.dim == b.dim && a.half_width == b.half_width &&
         a.samples == b.samples;
}

GridFunction sample(const BoxDomain& box,
                    const std::function<cplx(std::array<double, 2>)>& f) {
  GridFunction g(box);
  const std::int64_t n = box.total();
  for (std::int64_t i = 0; i < n; ++i) g.values[i] = f(box.point(i));
  return g;
}

double dist_periodic(const BoxDomain& box, const std::array<double, 2>& a,
                     const std::array<double, 2>& b) {
  const double period = box.period();
  double acc = 0.0;
  for (int d = 0; d < box.dim; ++d) {
    double delta = std::fabs(a[d] - b[d]);
    delta = std::fmod(delta, period);
    delta = std::min(delta, period - delta);
    acc += delta * delta;
  }
  return std::sqrt(acc);
}

CubeGeometry cube_geometry(const DyadicCube& q, int dim) {
  require(dim == 1 || dim == 2, errc::parameter, "cube_geometry dim");
  CubeGeometry g;
  g.level = q.level;
  g.side = std::exp2(-q.level);
  g.volume = dim == 2 ? g.side * g.side : g.side;
  for (int d = 0; d < dim; ++d) {
    g.corner[d] = q.k[d] * g.side;
    g.center[d] = (q.k[d] + 0.5) * g.side;
  }
  return g;
}

IndexBox cube_index_box(const BoxDomain& box, const DyadicCube& q) {
  require(q.level <= box.max_level(), errc::resolution,
          "cube level " + std::to_string(q.level) +
              " finer than grid resolution (max level " +
              std::to_string(box.max_level()) + ")");
  // Cells per cube side: 2^-level / h = 2^(max_level - level); exact since
  // both are powers of two.
  IndexBox ib;
  const double h = box.spacing();
  const double L = box.half_width;
  for (int d = 0; d < box.dim; ++d) {
    const double side = std::exp2(-q.level);
    const double lo = q.k[d] * side;
    const double hi = lo + side;
    // (lo + L)/h is an exact integer for admissible levels.
    const double ilo = (lo + L) / h;
    const double ihi = (hi + L) / h;
    ib.lo[d] = std::max<std::int64_t>(0, std::llround(ilo));
    ib.hi[d] = std::min<std::int64_t>(box.samples, std::llround(ihi));
  }
  if (box.dim == 1) {
    ib.lo[1] = 0;
    ib.hi[1] = 1;
  }
  return ib;
}

std::vector<DyadicCube> enumerate_cubes(const BoxDomain& box, int level_min,
                                        int level_max) {
  require(level_min <= level_max, errc::parameter,
          "enumerate_cubes needs level_min <= level_max");
  require(level_max <= box.max_level(), errc::resolution,
          "enumerate_cubes level_max exceeds grid resolution");
  std::vector<DyadicCube> out;
  const double L = box.half_width;
  for (int j = level_min; j <= level_max; ++j) {
    const double scale = std::exp2(j);
    const std::int64_t kmin =
        static_cast<std::int64_t>(std::floor(-L * scale));
    const std::int64_t kmax =
        static_cast<std::int64_t>(std::ceil(L * scale)) - 1;
    if (box.dim == 1) {
      for (std::int64_t k = kmin; k <= kmax; ++k)
        out.push_back({j, {k, 0}});
    } else {
      for (std::int64_t k0 = kmin; k0 <= kmax; ++k0)
        for (std::int64_t k1 = kmin; k1 <= kmax; ++k1)
          out.push_back({j, {k0, k1}});
    }
  }
  return out;
}

ScaleWindow make_scale_window(const BoxDomain& box, int j_min, int j_max) {
  require(j_min <= j_max, errc::parameter, "ScaleWindow needs j_min <= j_max");
  require(j_max + 1 <= box.max_level(), errc::resolution,
          "ScaleWindow j_max " + std::to_string(j_max) +
              " too fine for grid (need j_max + 1 <= max level " +
              std::to_string(box.max_level()) + ")");
  return ScaleWindow{j_min, j_max};
}

double ball_average(const GridFunction& f, const std::array<double, 2>& center,
                    double radius, double u) {
  require(radius > 0.0, errc::parameter, "ball_average radius must be > 0");
  require(u >= 0.0625, errc::parameter, "ball_average exponent too small");
  const BoxDomain& box = f.box;
  const double h = box.spacing();
  const bool is_sup = std::isinf(u);

  // Per-axis candidate index window, clipped to the box (no wraparound).
  std::array<std::int64_t, 2> lo = {0, 0}, hi = {0, 0};
  for (int d = 0; d < box.dim; ++d) {
    lo[d] = std::max<std::int64_t>(
        0, static_cast<std::int64_t>(std::ceil((center[d] - radius + box.half_width) / h - 1e-12)));
    hi[d] = std::min<std::int64_t>(
        box.samples - 1,
        static_cast<std::int64_t>(std::floor((center[d] + radius + box.half_width) / h + 1e-12)));
  }
  if (box.dim == 1) {
    lo[1] = 0;
    hi[1] = 0;
  }

  double acc = 0.0;
  std::int64_t count = 0;
  const double r2 = radius * radius;
  for (std::int64_t i0 = lo[0]; i0 <= hi[0]; ++i0) {
    const double d0 = box.coord(i0) - center[0];
    for (std::int64_t i1 = lo[1]; i1 <= hi[1]; ++i1) {
      const double d1 = box.dim == 2 ? box.coord(i1) - center[1] : 0.0;
      if (d0 * d0 + d1 * d1 > r2 * (1.0 + 1e-12)) continue;
      const double v = std::abs(f.values[box.flat(i0, i1)]);
      if (is_sup) {
        acc = std::max(acc, v);
      } else {
        acc += std::pow(v, u);
      }
      ++count;
    }
  }
  require(count > 0, errc::degenerate_ball,
          "ball of radius " + std::to_string(radius) + " captures no samples");
  if (is_sup) return acc;
  return std::pow(acc / static_cast<double>(count), 1.0 / u);
}

namespace {
constexpr std::uint32_t kGridMagic = 0x42414c50;  // "PLAB" little-endian
constexpr std::uint32_t kGridVersion = 1;
}  // namespace

void write_grid_file(const std::filesystem::path& path,
                     const GridFunction& f) {
  std::ofstream os(path, std::ios::binary);
  require(os.good(), errc::io, "cannot open " + path.string() + " for write");
  auto put_u32 = [&](std::uint32_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
  };
  auto put_f64 = [&](double v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
  };
  put_u32(kGridMagic);
  put_u32(kGridVersion);
  put_u32(static_cast<std::uint32_t>(f.box.dim));
  put_u32(static_cast<std::uint32_t>(f.box.samples));
  put_f64(f.box.half_width);
  for (std::int64_t i = 0; i < f.values.size(); ++i) {
    put_f64(f.values[i].real());
    put_f64(f.values[i].imag());
  }
  require(os.good(), errc::io, "short write to " + path.string());
}

GridFunction read_grid_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  require(is.good(), errc::io, "cannot open " + path.string() + " for read");
  auto get_u32 = [&]() {
    std::uint32_t v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
  };
  auto get_f64 = [&]() {
    double v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
  };
  require(get_u32() == kGridMagic, errc::io,
          path.string() + " is not a grid file (bad magic)");
  require(get_u32() == kGridVersion, errc::io,
          path.string() + ": unsupported grid file version");
  const int dim = static_cast<int>(get_u32());
  const int samples = static_cast<int>(get_u32());
  const double half_width = get_f64();
  BoxDomain box = BoxDomain::make(dim, half_width, samples);
  GridFunction f(box);
  for (std::int64_t i = 0; i < f.values.size(); ++i) {
    const double re = get_f64();
    const double im = get_f64();
    f.values[i] = cplx(re, im);
  }
  require(is.good(), errc::io, "short read from " + path.string());
  return f;
}

void write_grid_csv(const std::filesystem::path& path, const GridFunction& f) {
  std::ofstream os(path);
  require(os.good(), errc::io, "cannot open " + path.string() + " for write");
  os.precision(12);
  if (f.box.dim == 1)
    os << "x,re,im\n";
  else
    os << "x0,x1,re,im\n";
  for (std::int64_t i = 0; i < f.values.size(); ++i) {
    auto p = f.box.point(i);
    if (f.box.dim == 1)
      os << p[0] << ',' << f.values[i].real() << ',' << f.values[i].imag()
         << '\n';
    else
      os << p[0] << ',' << p[1] << ',' << f.values[i].real() << ','
         << f.values[i].imag() << '\n';
  }
  require(os.good(), errc::io, "short write to " + path.string());
}

}  // namespace plab
