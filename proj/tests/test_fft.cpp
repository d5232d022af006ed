#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "plab/fft.hpp"

using namespace plab;

namespace {

GridFunction random_field(const BoxDomain& box, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  GridFunction f(box);
  for (std::int64_t i = 0; i < f.values.size(); ++i)
    f.values[i] = cplx(u(rng), u(rng));
  return f;
}

}  // namespace

TEST_CASE("identity symbol reproduces the input") {
  for (int dim : {1, 2}) {
    auto box = dim == 1 ? BoxDomain::make(1, 4.0, 256)
                        : BoxDomain::make(2, 2.0, 32);
    auto f = random_field(box, 3);
    auto g = apply_symbol(f, [](std::array<double, 2>) { return cplx(1, 0); });
    CHECK((f.values - g.values).abs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("multiplier acts exactly on a single exponential") {
  auto box = BoxDomain::make(1, 4.0, 256);
  const std::int64_t mp = 9;  // signed bin
  const double xi = M_PI * mp / box.half_width;
  auto f = sample(box, [&](std::array<double, 2> x) {
    return std::exp(cplx(0, xi * x[0]));
  });
  auto g = apply_symbol(f, [&](std::array<double, 2> w) {
    return cplx(std::cos(w[0]) + 2.0, 0.5 * w[0]);
  });
  const cplx expect = cplx(std::cos(xi) + 2.0, 0.5 * xi);
  for (std::int64_t i = 0; i < box.total(); ++i)
    CHECK(std::abs(g.values[i] - expect * f.values[i]) <= 1e-10);
}

TEST_CASE("continuum transform of a gaussian matches the closed form") {
  auto box = BoxDomain::make(1, 4.0, 512);
  const double s = 0.3;
  auto f = sample(box, [&](std::array<double, 2> x) {
    return cplx(std::exp(-x[0] * x[0] / (2 * s * s)), 0.0);
  });
  auto spec = continuum_fourier(f);
  for (std::int64_t m = 0; m < box.total(); ++m) {
    const double xi = frequency_point(box, m)[0];
    if (std::fabs(xi) > 60.0) continue;  // beyond double-precision tail
    const double expect =
        s * std::sqrt(2 * M_PI) * std::exp(-s * s * xi * xi / 2);
    CHECK(std::abs(spec[m] - cplx(expect, 0)) <= 1e-10);
  }
}

TEST_CASE("two dimensional transform separates over axes") {
  auto box = BoxDomain::make(2, 2.0, 64);
  const double s = 0.25;  // keeps the wraparound tail below 1e-13
  auto f = sample(box, [&](std::array<double, 2> x) {
    return cplx(std::exp(-(x[0] * x[0] + x[1] * x[1]) / (2 * s * s)), 0.0);
  });
  auto spec = continuum_fourier(f);
  for (std::int64_t m = 0; m < box.total(); m += 97) {
    auto xi = frequency_point(box, m);
    const double g0 =
        s * std::sqrt(2 * M_PI) * std::exp(-s * s * xi[0] * xi[0] / 2);
    const double g1 =
        s * std::sqrt(2 * M_PI) * std::exp(-s * s * xi[1] * xi[1] / 2);
    CHECK(std::abs(spec[m] - cplx(g0 * g1, 0)) <= 1e-10);
  }
}

TEST_CASE("periodic convolution equals the direct coordinate quadrature") {
  auto box = BoxDomain::make(1, 2.0, 32);
  auto f = random_field(box, 5);
  auto g = random_field(box, 6);
  auto conv = convolve_periodic(f, g);
  const int n = box.samples;
  const double h = box.spacing();
  for (int i = 0; i < n; ++i) {
    cplx acc = 0.0;
    for (int y = 0; y < n; ++y) {
      // g evaluated at the coordinate x_i - x_y, wrapped into [-L, L)
      const int iw = (((i - y) + n / 2) % n + n) % n;
      acc += f.values[y] * g.values[iw];
    }
    CHECK(std::abs(conv.values[i] - h * acc) <= 1e-12);
  }
}

TEST_CASE("parseval identity on the torus") {
  for (int dim : {1, 2}) {
    auto box = dim == 1 ? BoxDomain::make(1, 4.0, 128)
                        : BoxDomain::make(2, 2.0, 32);
    auto f = random_field(box, 9);
    auto spec = continuum_fourier(f);
    const double hpow = std::pow(box.spacing(), box.dim);
    const double lhs = hpow * f.values.abs2().sum();
    const double rhs = spec.abs2().sum() / std::pow(box.period(), box.dim);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("forward and inverse transforms are mutually inverse") {
  auto box = BoxDomain::make(2, 2.0, 32);
  auto f = random_field(box, 13);
  auto back = dft_inverse(box, dft_forward(f));
  CHECK((f.values - back.values).abs().maxCoeff() <= 1e-12);
}
