#pragma once

// Scale-and-space weight models w(x, 2^-j): positive evaluators over
// (point, dyadic level) pairs that generalize the fixed-smoothness factor
// 2^(js).  A weight declares regularity exponents (alpha1, alpha2, alpha3);
// membership is certified empirically over a finite window by measuring the
// smallest constants that make the regularity inequalities hold.  Those
// constants feed tolerance budgets downstream, so they are reported, not
// merely thresholded.

#include <functional>
#include <string>

#include "plab/grid.hpp"

namespace plab {

/// Declared regularity exponents of a weight, all in [0, inf):
///   alpha1 bounds the admissible decay of w across increasing levels,
///   alpha2 bounds the admissible growth,
///   alpha3 bounds the spatial transport cost at level j, via the factor
///           (1 + 2^j |x - y|)^alpha3.
struct WeightClass {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double alpha3 = 0.0;
};

/// Class arithmetic for multiplying a weight by 2^(js): the scale exponents
/// shift to ((alpha1 - s)_+, (alpha2 + s)_+) and the transport exponent is
/// unchanged.
WeightClass shifted_class(const WeightClass& c, double s);

/// A weight model: pure positive evaluator plus its declared class.
///   star        - the scale lower bound reads 2^(+(j-nu) alpha1) instead of
///                 2^(-(j-nu) alpha1), i.e. the weight is declared to *grow*
///                 at least that fast across levels.
///   homogeneous - the level argument ranges over all of Z, not just Z_+.
struct WeightModel {
  std::string name;
  std::function<double(std::array<double, 2>, int)> evaluator;
  WeightClass declared;
  bool star = false;
  bool homogeneous = false;

  double operator()(std::array<double, 2> x, int j) const {
    return evaluator(x, j);
  }
};

/// w_j = 2^(js): the fixed-smoothness weight.  Declared class
/// (max(0,-s), max(0,s), 0) with constants exactly 1.
WeightModel power_weight(double s);

/// w_j = 2^(js) declared in the star class (s, s, 0); requires s >= 0
/// (a decaying weight cannot grow across levels).
WeightModel power_weight_star(double s);

/// w_j = 2^-j sqrt(|j| + 1): unit decay with a square-root-log correction,
/// defined for every integer level.  Declared class (1, 0, 0).
WeightModel log_root_weight();

/// w_j(x) = 2^(js) (1 + |x|)^eps: a power weight tilted by spatial growth.
/// Requires eps >= 0; declared class (max(0,-s), max(0,s), eps).
WeightModel tilted_power_weight(double s, double eps);

/// Lift companion: w_j -> 2^(-js) w_j, the weight that absorbs an order-s
/// smoothing of the underlying functions.  Declared class shifts by -s.
WeightModel lift_weight(const WeightModel& w, double s);

/// Embedding companion: w_j(x) -> 2^(j(tau - gamma)) (1 + |x|)^delta w_j(x).
/// Declared class ((alpha1 + gamma - tau)_+, (alpha2 + tau - gamma)_+,
/// alpha3 + delta); requires delta >= 0.
WeightModel embedding_weight(const WeightModel& w, double tau, double gamma,
                             double delta);

/// Morrey-exponent collapse companion: w_j -> 2^(jn(tau - tau_tilde)) w_j,
/// with n the spatial dimension.  Declared class shifts by n(tau - tau_tilde).
WeightModel tau_shift_weight(const WeightModel& w, int dim, double tau,
                             double tau_tilde);

/// Empirical class certificate: the smallest constants C making each
/// regularity inequality hold over the deterministic sample.
///   c_scale_lower : 2^(-(j-nu) alpha1) w_nu(x) <= C w_j(x)   (j >= nu);
///                   with star declared the factor is 2^(+(j-nu) alpha1).
///   c_scale_upper : w_j(x) <= C 2^((j-nu) alpha2) w_nu(x)    (j >= nu).
///   c_transport   : w_j(x) <= C w_j(y) (1 + 2^j |x - y|)^alpha3.
/// pass is true iff every constant is finite and at most cap.
struct WeightClassReport {
  double c_scale_lower = 0.0;
  double c_scale_upper = 0.0;
  double c_transport = 0.0;
  double cap = 0.0;
  bool pass = false;
};

/// Certify the declared class of w over the window and box: evaluates the
/// weight on a deterministic stride sample of points and on all level pairs
/// j >= nu in the window, and reports worst-case constants.  Windows with
/// negative levels require a homogeneous weight.
WeightClassReport check_weight_class(const WeightModel& w,
                                     const ScaleWindow& window,
                                     const BoxDomain& box, double cap = 1e3);

}  // namespace plab
