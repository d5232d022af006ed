#include "plab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace plab {

WeightClass shifted_class(const WeightClass& c, double s) {
  return {std::max(0.0, c.alpha1 - s), std::max(0.0, c.alpha2 + s), c.alpha3};
}

WeightModel power_weight(double s) {
  require(std::isfinite(s), errc::parameter, "weight exponent must be finite");
  WeightModel w;
  w.name = "power(" + std::to_string(s) + ")";
  w.evaluator = [s](std::array<double, 2>, int j) { return std::exp2(s * j); };
  w.declared = {std::max(0.0, -s), std::max(0.0, s), 0.0};
  w.homogeneous = true;  // 2^(js) makes sense at every integer level
  return w;
}

WeightModel power_weight_star(double s) {
  require(s >= 0.0, errc::parameter,
          "star declaration needs a nondecreasing scale exponent");
  WeightModel w = power_weight(s);
  w.name = "power_star(" + std::to_string(s) + ")";
  w.declared = {s, s, 0.0};
  w.star = true;
  return w;
}

WeightModel log_root_weight() {
  WeightModel w;
  w.name = "log_root";
  w.evaluator = [](std::array<double, 2>, int j) {
    return std::exp2(-j) * std::sqrt(std::abs(j) + 1.0);
  };
  w.declared = {1.0, 0.0, 0.0};
  w.homogeneous = true;
  return w;
}

WeightModel tilted_power_weight(double s, double eps) {
  require(eps >= 0.0, errc::parameter, "spatial tilt must be nonnegative");
  WeightModel w;
  w.name = "tilted_power(" + std::to_string(s) + "," + std::to_string(eps) + ")";
  w.evaluator = [s, eps](std::array<double, 2> x, int j) {
    return std::exp2(s * j) * std::pow(1.0 + std::hypot(x[0], x[1]), eps);
  };
  w.declared = {std::max(0.0, -s), std::max(0.0, s), eps};
  w.homogeneous = true;
  return w;
}

WeightModel lift_weight(const WeightModel& w, double s) {
  require(std::isfinite(s), errc::parameter, "lift order must be finite");
  WeightModel out = w;
  out.name = w.name + "+lift(" + std::to_string(s) + ")";
  out.evaluator = [base = w.evaluator, s](std::array<double, 2> x, int j) {
    return std::exp2(-s * j) * base(x, j);
  };
  out.declared = shifted_class(w.declared, -s);
  return out;
}

WeightModel embedding_weight(const WeightModel& w, double tau, double gamma,
                             double delta) {
  require(std::isfinite(tau) && std::isfinite(gamma), errc::parameter,
          "embedding exponents must be finite");
  require(delta >= 0.0, errc::parameter, "spatial tilt must be nonnegative");
  WeightModel out = w;
  out.name = w.name + "+embed";
  out.evaluator = [base = w.evaluator, tau, gamma,
                   delta](std::array<double, 2> x, int j) {
    return std::exp2((tau - gamma) * j) *
           std::pow(1.0 + std::hypot(x[0], x[1]), delta) * base(x, j);
  };
  out.declared = shifted_class(w.declared, tau - gamma);
  out.declared.alpha3 = w.declared.alpha3 + delta;
  return out;
}

WeightModel tau_shift_weight(const WeightModel& w, int dim, double tau,
                             double tau_tilde) {
  require(dim == 1 || dim == 2, errc::parameter, "dimension must be 1 or 2");
  require(std::isfinite(tau) && std::isfinite(tau_tilde), errc::parameter,
          "shift exponents must be finite");
  const double s = dim * (tau - tau_tilde);
  WeightModel out = w;
  out.name = w.name + "+tau_shift(" + std::to_string(s) + ")";
  out.evaluator = [base = w.evaluator, s](std::array<double, 2> x, int j) {
    return std::exp2(s * j) * base(x, j);
  };
  out.declared = shifted_class(w.declared, s);
  return out;
}

WeightClassReport check_weight_class(const WeightModel& w,
                                     const ScaleWindow& window,
                                     const BoxDomain& box, double cap) {
  require(cap > 0.0, errc::parameter, "constant cap must be positive");
  require(w.homogeneous || window.j_min >= 0, errc::parameter,
          "negative levels need a homogeneous weight");

  // Deterministic stride sample of grid points (16 per axis).
  std::vector<std::array<double, 2>> pts;
  const int stride = std::max(1, box.samples / 16);
  for (int i0 = 0; i0 < box.samples; i0 += stride) {
    if (box.dim == 1) {
      pts.push_back({box.coord(i0), 0.0});
    } else {
      for (int i1 = 0; i1 < box.samples; i1 += stride)
        pts.push_back({box.coord(i0), box.coord(i1)});
    }
  }

  WeightClassReport rep;
  rep.cap = cap;
  for (const auto& x : pts) {
    // level-pair regularity at a fixed point
    for (int nu = window.j_min; nu <= window.j_max; ++nu) {
      const double wnu = w(x, nu);
      require(std::isfinite(wnu) && wnu > 0.0, errc::parameter,
              "weight evaluator must be positive and finite");
      for (int j = nu; j <= window.j_max; ++j) {
        const double ratio = w(x, j) / wnu;  // w_j / w_nu
        const double lower =
            w.star ? std::exp2(static_cast<double>(j - nu) * w.declared.alpha1)
                   : std::exp2(-static_cast<double>(j - nu) * w.declared.alpha1);
        rep.c_scale_lower = std::max(rep.c_scale_lower, lower / ratio);
        rep.c_scale_upper = std::max(
            rep.c_scale_upper,
            ratio / std::exp2(static_cast<double>(j - nu) * w.declared.alpha2));
      }
    }
    // spatial transport at a fixed level
    for (const auto& y : pts) {
      const double d = std::hypot(x[0] - y[0], x[1] - y[1]);
      for (int j = window.j_min; j <= window.j_max; ++j) {
        const double bound =
            w(x, j) / (w(y, j) * std::pow(1.0 + std::exp2(j) * d,
                                          w.declared.alpha3));
        rep.c_transport = std::max(rep.c_transport, bound);
      }
    }
  }
  rep.pass = std::isfinite(rep.c_scale_lower) &&
             std::isfinite(rep.c_scale_upper) &&
             std::isfinite(rep.c_transport) && rep.c_scale_lower <= cap &&
             rep.c_scale_upper <= cap && rep.c_transport <= cap;
  return rep;
}

}  // namespace plab
