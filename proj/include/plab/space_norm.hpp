#pragma once

// Function-space quasi-norms built from dyadic analysis ladders.  A space is
// described by a scale (which outer mixed norm wraps the ladder), a
// fundamental space, a weight, the cube-localization exponent tau, an inner
// exponent q, and the damping exponent a of the shifted supremum.  The norm
// of f is the mixed norm of the ladder {sup_z |phi_j * f(.+z)| /
// (1 + 2^j |z|)^a}_j.  Alongside the norm itself the module provides the
// equivalence harness (compare alternative analysis systems on a battery of
// functions), embedding inequality checks, the pointwise-control constant,
// and a band-concentrated witness whose maximal field has an explicit decay
// exponent.

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "plab/grid.hpp"
#include "plab/kernels.hpp"
#include "plab/sequence.hpp"
#include "plab/spaces.hpp"
#include "plab/weights.hpp"

namespace plab {

/// The four outer-norm arrangements of a weighted analysis ladder.
enum class Scale {
  besov,                  // cube sup of truncated level sums of space norms
  besov_morrey,           // level sum of per-level cube suprema
  triebel_lizorkin,       // cube sup of space norms of truncated level stacks
  triebel_lizorkin_morrey,// cube sup of space norms of full-window stacks
};

/// Mixed-norm kind implementing each scale.
MixKind scale_kind(Scale scale);

/// Lower-case display name ("besov", "besov_morrey", ...).
std::string scale_name(Scale scale);

/// Inverse of scale_name; errc::parameter on unknown names.
Scale parse_scale(const std::string& name);

/// Parameter bundle for one function-space quasi-norm.
struct SpaceSpec {
  Scale scale;
  FundamentalSpace space;
  WeightModel weight;
  double tau;         // cube-localization exponent, >= 0
  double q;           // inner exponent, (0, inf]
  double a;           // damping exponent of the shifted supremum, > 0
  ScaleWindow window;  // analysis levels
};

/// Default damping exponent: N0 + alpha3 + dim + 1.  Exceeds every sufficient
/// threshold stated for the parameter ranges in scope.
double default_peetre_decay(const FundamentalSpace& space, const WeightModel& w,
                            int dim);

/// Whether the damping exponent clears the admissibility threshold
/// a > N0 + alpha3 (required for the test-function embeddings; advisory for
/// plain norm evaluation).
bool peetre_decay_admissible(const SpaceSpec& spec);

/// Validate exponents and window shape; throws errc::parameter.
void check_space_spec(const SpaceSpec& spec);

/// The ladder of damped shifted suprema of the analyzed function: level j is
/// damped_sup(convolve(f, j), 2^j, a).  The system window must contain
/// `window` (errc::parameter) and share the box of f (errc::alignment).
SequenceField maximal_ladder(const GridFunction& f, const ConvolutionSystem& sys,
                             const ScaleWindow& window, double a);

/// Quasi-norm of f in the space described by spec, analyzed through sys.
/// Errors from spec validation and the mixed norm propagate.
double space_norm(const GridFunction& f, const SpaceSpec& spec,
                  const ConvolutionSystem& sys);

/// One named way to compute a space norm on a function.  Factories below
/// copy the spec and hold the convolution system by reference; keep the
/// system alive while the functional is in use.
using NormFunctional = std::function<double(const GridFunction&)>;

/// The defining norm evaluated through the given system (also serves as an
/// alternative when handed a second, independently built system).
NormFunctional system_norm(const SpaceSpec& spec, const ConvolutionSystem& sys);

/// Norm through compactly supported local means.  Each call checks the
/// moment-order hypothesis moment_order + 1 > max(alpha1, a + n tau + alpha2)
/// and throws errc::hypothesis when it fails.
NormFunctional local_mean_norm(const SpaceSpec& spec,
                               const LocalMeanSystem& sys);

/// Norm with the shifted supremum dropped: the ladder carries the plain
/// convolutions |phi_j * f|.  Never exceeds the defining norm.
NormFunctional plain_convolution_norm(const SpaceSpec& spec,
                                      const ConvolutionSystem& sys);

/// One battery-function / characterization cell of an equivalence run.
struct EquivalenceRow {
  std::string function_id;
  std::string characterization;
  double value = 0.0;
  double ratio = 0.0;  // value / baseline value for the same function
  bool ok = false;     // false when the characterization's hypothesis failed
  std::string note;    // failure message when !ok
};

struct EquivalenceReport {
  std::vector<EquivalenceRow> rows;      // battery-major, baseline row first
  std::map<std::string, double> spread;  // per characterization: max/min ratio
};

/// Evaluate the baseline norm and every named alternative on each battery
/// member.  Rows whose functional throws errc::hypothesis are marked and the
/// run continues; any other error propagates.  Spread skips failed rows.
EquivalenceReport equivalence_report(
    const std::vector<std::pair<std::string, GridFunction>>& battery,
    const SpaceSpec& spec, const ConvolutionSystem& sys,
    const std::vector<std::pair<std::string, NormFunctional>>& alternatives);

/// Report rows as TSV (function_id, characterization, value, ratio) and the
/// spread summary as JSON.
std::string equivalence_tsv(const EquivalenceReport& report);
std::string equivalence_summary_json(const EquivalenceReport& report);

/// Twelve deterministic probe functions spanning smoothness, oscillation,
/// translation, and band limitation; the random member is fixed by `seed`.
std::vector<std::pair<std::string, GridFunction>> equivalence_battery(
    const BoxDomain& box, unsigned seed = 20260814u);

/// One embedding inequality instance evaluated on computed norms.
struct EmbeddingReport {
  struct Row {
    std::string label;
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;  // lhs <= rhs up to 1e-12 relative rounding headroom
  };
  std::vector<Row> rows;
  bool all_hold = false;
};

/// Exact embedding inequalities on computed values: (a) within each scale,
/// the norm at inner exponent q2 never exceeds the norm at q1 <= q2; (b) the
/// truncated level-sup norm (the q = infinity member of the level-sum scale)
/// is dominated by every scale's norm at spec.q.  The full-stack scale row of
/// (b) is the chain that factors every space through the level-sup space.
EmbeddingReport embedding_check(const GridFunction& f, const SpaceSpec& spec,
                                const ConvolutionSystem& sys, double q1,
                                double q2);

/// Largest value over levels and points of the embedding-lifted weight times
/// the maximal ladder, divided by the space norm: the uniform-control
/// constant of the pointwise bound.  The lift uses the space's own gamma and
/// delta exponents.
double pointwise_control_ratio(const GridFunction& f, const SpaceSpec& spec,
                               const ConvolutionSystem& sys);

/// Desk-scale check of the scaled maximal bound that removes the shifted
/// supremum: for deterministic probes f and each level j of the window,
/// ratio_j = ||w_j (eta_{j,lambda} * |f|^r)^{1/r}||_L / ||w_j f||_L.
/// Requires lambda > dim and r > 0.  pass means worst_ratio <= cap.
struct MaximalBoundReport {
  double worst_ratio = 0.0;
  double cap = 0.0;
  bool pass = false;
  std::vector<double> ratios;  // probe-major, levels inner
};

MaximalBoundReport check_scaled_maximal_bound(const FundamentalSpace& space,
                                              const WeightModel& w,
                                              const BoxDomain& box,
                                              const ScaleWindow& window,
                                              double r, double lambda,
                                              double cap);

/// Centered cardinal B-spline of the given order (>= 1): order 1 is the unit
/// box on [-1/2, 1/2], each next order convolves with the box once.  Support
/// is [-order/2, order/2]; values are exact piecewise polynomials.
double centered_bspline(int order, double t);

/// Sampled periodization of the even band-concentrated profile whose
/// frequency content is the m-fold self-convolution of a box supported in
/// [-1/2, 1/2] (one dimension; errc::parameter otherwise).  The profile is an
/// exact trigonometric polynomial on the grid: every analysis level j >= 1 of
/// a plateau band system annihilates it identically, while the level-0
/// maximal field decays like (1 + |x|)^{max(-a, -m)}.
GridFunction band_peak_profile(const BoxDomain& box, int m);

/// Decay/growth report of the band-concentrated witness.
struct DecayWitnessReport {
  int m = 0;
  double a = 0.0;
  double p = 0.0;
  double fitted_exponent = 0.0;    // least-squares slope of the level-0 field
  double expected_exponent = 0.0;  // max(-a, -m)
  double base_sup = 0.0;           // sup of the level-0 maximal field
  double high_sup = 0.0;           // sup over levels >= 1 of the ladder
  std::vector<double> half_widths; // growing boxes probed
  std::vector<double> norms;       // level-sum norm on each box
  std::vector<double> growth_rates;// log2 of successive norm ratios
  bool expected_finite = false;    // p * min(a, m) > 1
  bool stabilizes = false;         // final growth rate <= 0.15
};

/// Build the witness on growing boxes (fixed sample spacing), fit the decay
/// exponent of the level-0 maximal field against 1 + |x|, record the
/// annihilation of every higher level, and probe whether the level-sum norm
/// over growing boxes stabilizes.  Requires m >= 1, a > 0, p > 0, q > 0.
DecayWitnessReport band_peak_decay_witness(int m, double a, double p, double q);

}  // namespace plab
