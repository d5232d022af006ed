#pragma once

// Pluggable fundamental quasi-norms over grid functions: Lebesgue, weighted
// Lebesgue, Morrey (plain and generalized), Orlicz, Herz (inhomogeneous and
// homogeneous), variable-exponent Lebesgue, amalgam, and the split-exponent
// counterexample space.  Every space carries declared axiom parameters
//   theta - exponent of the theta-triangle inequality,
//   n0    - decay order making (1 + |x|)^(-n0) a member,
//   gamma, delta - cube nondegeneracy exponents: the norm of the indicator of
//       the dyadic cube at level j >= 0 with corner index k is bounded below
//       by a constant times 2^(-j gamma) (1 + |k|)^(-delta).
// verify_axioms certifies positivity, homogeneity, the theta-triangle
// inequality, the lattice property, monotone limits, and the nondegeneracy
// exponents empirically over a battery of grid functions; constants and
// fitted exponents are reported, not silently thresholded.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "plab/grid.hpp"
#include "plab/weights.hpp"

namespace plab {

struct SpaceParams {
  double theta = 1.0;
  double n0 = 1.0;
  double gamma = 0.0;
  double delta = 0.0;
};

/// Convex growth function for Luxemburg-type norms: fn(0) = 0, increasing,
/// convex, with fn(1) >= 1 so unit cubes obey the declared decay.
struct YoungFunction {
  std::string name;
  std::function<double(double)> fn;
};
YoungFunction young_power(double p);      // t^p, requires p >= 1
YoungFunction young_exp();                // e^t - 1
YoungFunction young_power_log(double p);  // t^p log(e + t), requires p >= 1

/// Cube-side growth profile for generalized Morrey norms.
struct GrowthProfile {
  std::string name;
  std::function<double(double)> fn;  // positive on (0, inf)
};
GrowthProfile growth_power(double g);  // t^g, requires g >= 0

/// Spatially varying exponent with its extremes declared.
struct ExponentField {
  std::string name;
  std::function<double(std::array<double, 2>)> fn;
  double p_min = 1.0;
  double p_max = 1.0;
};
/// p(x) = p_inf + c / log(e + |x|): the variation at small separations and
/// toward infinity is controlled by 1/log, the regularity the maximal
/// inequalities need.  Requires p_inf >= 1 and c >= 0.
ExponentField log_smooth_exponent(double p_inf, double c);
/// p(x) = 1 below the hyperplane {last coordinate = 0} and 2 strictly above:
/// the jump that makes averaging operators unbounded.
ExponentField half_space_exponent(int dim);

/// A fundamental space: named quasi-norm evaluator plus declared parameters.
/// Evaluators are immutable after construction and safe to share across
/// threads; each evaluation is self-contained.
class FundamentalSpace {
 public:
  FundamentalSpace() = default;
  FundamentalSpace(std::string name, SpaceParams params,
                   std::function<double(const GridFunction&)> eval)
      : name_(std::move(name)), params_(params), eval_(std::move(eval)) {}

  const std::string& name() const { return name_; }
  const SpaceParams& params() const { return params_; }
  /// The quasi-norm.  Requires finite samples and a matching dimension.
  double operator()(const GridFunction& f) const { return eval_(f); }

 private:
  std::string name_;
  SpaceParams params_;
  std::function<double(const GridFunction&)> eval_;
};

/// Riemann p-norm; p = infinity takes the max of |f|.
FundamentalSpace lebesgue(int dim, double p);
/// Riemann p-norm against the density (1 + |x|)^rho dx.
FundamentalSpace weighted_lebesgue(int dim, double p, double rho);
/// sup over dyadic cubes (all levels resolved by the grid, plus the whole
/// box standing in for side -> infinity) of
/// side^(n/p - n/u) (integral_Q |f|^u)^(1/u); requires 0 < u <= p < inf.
/// The whole-box entry makes morrey(p, p) collapse to lebesgue(p) exactly.
FundamentalSpace morrey(int dim, double p, double u);
/// sup over the same cube family of phi(side) (|Q|^-1 integral_Q |f|^p)^(1/p).
FundamentalSpace generalized_morrey(int dim, double p, GrowthProfile phi);
/// Luxemburg norm: least lambda with integral Phi(|f|/lambda) <= 1.
FundamentalSpace orlicz(int dim, YoungFunction Phi);
/// ||f chi_{Q0}||_p plus the l^q combination over j >= 1 of
/// 2^(j alpha) ||f chi_{Cj}||_p, where Q0 = [-1,1]^n and the shells
/// Cj = [-2^j, 2^j]^n minus [-2^(j-1), 2^(j-1)]^n tile the rest of the box.
FundamentalSpace herz(int dim, double p, double q, double alpha);
/// Same shells continued inward across all resolved negative j, no separate
/// unit-cube term; pure l^q over the rings.
FundamentalSpace herz_homogeneous(int dim, double p, double q, double alpha);
/// Luxemburg norm of the modular integral (|f(x)|/lambda)^p(x) dx.
FundamentalSpace variable_lebesgue(int dim, ExponentField pf);
/// l^q over integer-corner unit tiles z + [0,1)^n of
/// (1 + |z|)^s ||f||_Lp(tile); requires s > -(n+1).
FundamentalSpace amalgam(int dim, double p, double q, double s);
/// The variable space with exponent 1 below the interface and 2 above it:
/// every averaging bound fails across the interface at small scales.
FundamentalSpace half_space_split(int dim);

/// Build a space from a JSON object string, e.g.
///   {"kind":"morrey","dim":1,"p":2,"u":1.5}
///   {"kind":"orlicz","dim":2,"young":"power","p":2}
///   {"kind":"variable_lebesgue","dim":1,"exponent":"log_smooth",
///    "p_inf":1.5,"c":1}
/// Young functions, growth profiles, and exponent fields come from the named
/// preset registries above; no code is accepted in configuration.  "inf" is
/// accepted for infinite exponents.  Malformed JSON raises errc::io; unknown
/// kinds, presets, or fields raise errc::parameter.
FundamentalSpace space_from_config(const std::string& json_text);

/// Centered maximal average: at each sample, the largest mean of |f| over
/// Euclidean balls with dyadic radii from one spacing up to the box period
/// (clipped at the box edge, no wraparound), never below |f| itself.
GridFunction maximal_function(const GridFunction& f);

/// Deterministic battery of test functions spanning a centered bump, an
/// off-center bump, a unit-tile indicator, a sign-changing wave packet, a
/// two-bump sum, and a slowly decaying tail.
std::vector<GridFunction> standard_battery(const BoxDomain& box);

/// Empirical axiom certificate.  Defects are worst signed violations over
/// the battery (nonpositive means the inequality held on every sample):
///   homogeneity_defect  max | ||c f|| - |c| ||f|| | / (|c| ||f||),
///                       scalars c in {-2, 1/2, i};
///   triangle_defect     max ||f+g||^theta - ||f||^theta - ||g||^theta;
///   lattice_defect      max ||g|| - ||f|| over masked pairs |g| <= |f|;
///   fatou_defect        max ||f|| - sup_m ||f_m|| over monotone height
///                       truncations f_m rising to f.
/// The cube-decay exponents (gamma_fit, delta_fit) come from a joint least
/// squares of log2 ||chi_Q|| against level j and log2(1 + |k|) over cubes
/// placed away from the origin, where both predictors vary.  delta_fit is a
/// decay order and is reported as zero when the norms grow with position;
/// gamma_fit keeps its sign.  lower_constant is the smallest
/// ||chi_Q|| 2^(j gamma) (1 + |k|)^delta over the probe cubes (origin column
/// included) at the declared exponents; it must stay positive.
struct AxiomReport {
  bool positivity = false;
  double homogeneity_defect = 0.0;
  double triangle_defect = 0.0;
  double lattice_defect = 0.0;
  double fatou_defect = 0.0;
  double gamma_fit = 0.0;
  double delta_fit = 0.0;
  double lower_constant = 0.0;
  bool pass = false;
};
AxiomReport verify_axioms(const FundamentalSpace& space,
                          const std::vector<GridFunction>& battery);

/// Smoothed-maximal compatibility sweep with the kernels
/// eta_{j,R}(x) = 2^(jn) (1 + 2^j |x|)^(-R).  For each battery member and
/// each level j in the window, compares
///   || w_j (eta_{j,R} * |f|^r)^(1/r) ||  against  || w_j f ||,
/// and likewise for level-indexed families combined pointwise in l^q before
/// the space norm is taken (the vector arm cycles the battery across levels).
/// PASS iff every ratio stays at or below cap.  Requires r > 0, R > n + 1,
/// and a window starting at level zero or above.
struct MaximalCompatReport {
  double worst_ratio = 0.0;
  double worst_vector_ratio = 0.0;
  int worst_level = 0;
  double cap = 0.0;
  bool pass = false;
};
MaximalCompatReport verify_peetre_compat(
    const FundamentalSpace& space, double r, double R, const WeightModel& w,
    double q, const std::vector<GridFunction>& battery,
    const ScaleWindow& window, double cap = 20.0);

}  // namespace plab
