#pragma once

// Atomic and molecular decomposition at desk scale.  A square-root band
// partition supplies analysis/synthesis kernels whose symbol squares
// telescope to one, so applying each kernel twice reproduces covered inputs
// exactly.  On top of it sit cube-integrated analysis coefficients with
// on-demand normalized blocks, structural checkers for atom and molecule
// conditions, admissibility gates for synthesis, the coefficient-space norm,
// and a JSONL serialization of sparse coefficient fields.

#include <filesystem>
#include <functional>
#include <vector>

#include "plab/grid.hpp"
#include "plab/kernels.hpp"
#include "plab/sequence.hpp"
#include "plab/space_norm.hpp"

namespace plab {

/// Low-pass plus band kernels whose symbols are square roots of a telescoping
/// plateau partition:
///   S_0(xi)^2 = P(|xi|),   S_j(xi)^2 = P(2^-j |xi|) - P(2^(1-j) |xi|),
/// so that S_0^2 + sum_{j=1..J} S_j^2 == P(2^-J |xi|), which is exactly 1 on
/// {|xi| <= 2^J}.  Every band kernel's symbol vanishes identically near the
/// origin, so its continuum moments of all orders are zero and its discrete
/// moments are tail-small.  Applying a level twice and summing reproduces any
/// input whose spectrum the partition covers.
class CalderonPair : public ConvolutionSystem {
 public:
  const BoxDomain& box() const override { return box_; }
  const ScaleWindow& window() const override { return window_; }
  GridFunction convolve(const GridFunction& f, int j) const override;

  /// Radial symbol value of level j at frequency radius r (exact, for tests).
  double symbol(int j, double r) const;
  /// Centered spatial kernel of level j.
  GridFunction kernel(int j) const;
  /// Relative spectral mass of f outside the telescoped plateau: the L^2
  /// fraction of the spectrum weighted by 1 - sum_j S_j^2.  Zero exactly for
  /// inputs band-limited inside the covered ball.
  double coverage_gap(const GridFunction& f) const;

 private:
  friend CalderonPair build_calderon_pair(const BoxDomain&, const ScaleWindow&);
  GridFunction convolve_spectrum(const Eigen::ArrayXcd&, int) const override;

  BoxDomain box_;
  ScaleWindow window_;
  PlateauProfile plateau_{1.0, 2.0};
  std::vector<Eigen::ArrayXd> symbols_;  // per level, over spectral bins
};

/// Build the pair on the window (which must start at level 0; the low-pass
/// slot is level 0).  Errors: errc::resolution when the finest band exceeds
/// the grid margin; errc::parameter for a window not starting at 0.
CalderonPair build_calderon_pair(const BoxDomain& box,
                                 const ScaleWindow& window);

/// Everything the cube analysis of one function produces: the nonnegative
/// cube-integral coefficients
///   lambda_{jk} = 2^{j n} integral_{Q_{jk}} |(S_j * f)(y)| dy
/// (zero entries dropped) and the per-level filtered fields S_j * f from
/// which blocks are synthesized on demand.
struct AnalysisResult {
  CoefficientField coefficients;
  SequenceField filtered;
};

/// Cube-integrated analysis over the pair's window.  The pair must cover the
/// input: the coverage gap may not exceed `spectral_slack` (relative L^2).
/// Errors: errc::resolution when the spectrum leaks past the covered ball by
/// more than the slack; errc::alignment on a box mismatch.
AnalysisResult analyze(const GridFunction& f, const CalderonPair& pair,
                       double spectral_slack = 0.1);

/// One normalized block,
///   A_{jk}(x) = (1 / lambda_{jk}) integral_{Q_{jk}} S_j(x - y) (S_j*f)(y) dy,
/// or the zero function when the coefficient vanishes (the dropped-entry
/// convention).  Errors: errc::parameter when the cube level is outside the
/// window.
GridFunction analysis_block(const AnalysisResult& res, const CalderonPair& pair,
                            const DyadicCube& q);

/// The telescoped resynthesis sum_{j,k} lambda_{jk} A_{jk}, which collapses
/// to sum_j S_j * (S_j * f) because the level-j cubes tile the box.  Equals
/// the input exactly (to roundoff) whenever the coverage gap is zero.
GridFunction reconstruct(const AnalysisResult& res, const CalderonPair& pair);

/// Smallest constant C such that, at every level j and grid point x, the
/// damped shift supremum of the coefficient layer is at most C times the
/// damped supremum of the filtered field:
///   sup_z |Lambda(x+z, 2^-j)| (1+2^j|z|)^-a <= C sup_z |S_j*f(x+z)| (1+2^j|z|)^-a.
/// Errors: errc::parameter for a <= 0.
double coefficient_domination_constant(const AnalysisResult& res, double a);

/// Which block family a bound certificate refers to, and its budgets:
/// derivative_order K (sup-norm control of derivatives through order K),
/// moment_order L (vanishing moments through order L; -1 means none), and,
/// for molecules, the decay exponent N of the envelope (1+|x-c|/l)^-N.
struct BlockSpec {
  bool molecule = false;
  int derivative_order = 0;  // K >= 0
  int moment_order = -1;     // L >= -1
  double decay = 0.0;        // N; molecules need N > moment_order + dim
};

/// Measured block certificate.  Constants are reported, not thresholded:
///   size_constant  — smallest C with ||d^alpha b||_inf <= C 2^(j |alpha|)
///                    over ||alpha||_1 <= K (atoms and molecules);
///   decay_constant — smallest C with |d^alpha b(x)| <= C (1+|x-c|/l)^-N
///                    (molecules);
///   moment_worst   — largest |sum_x x^beta b(x) h^n| over ||beta||_1 <= L,
///                    relative to the absolute-value moment mass (only when
///                    the cube side is below one; coarser cubes owe no
///                    moments).
/// support_ok is exact vanishing outside 3Q (atoms; molecules skip it);
/// moments_ok is moment_worst <= 1e-8; pass bundles the applicable checks.
struct BlockReport {
  bool support_ok = false;
  double size_constant = 0.0;
  double decay_constant = 0.0;
  double moment_worst = 0.0;
  bool moments_ok = false;
  bool pass = false;
};

/// Measure the block conditions of b against cube q.  Derivatives are taken
/// spectrally; moments by grid quadrature.  Errors: errc::parameter for a
/// malformed spec (K < 0, L < -1, molecule decay too small) or a cube level
/// beyond the grid.
BlockReport check_block(const GridFunction& b, const DyadicCube& q,
                        const BlockSpec& spec);

/// Hand-built compactly supported atom on 3Q: per axis, the (L+1)-fold
/// discrete difference (step an exact number of grid samples) of an
/// order-(K+2) centered B-spline scaled to the cube, tensorized in 2-d and
/// normalized so the measured size constant is one.  Differences over exact
/// grid shifts make the discrete moments through order L vanish to roundoff
/// by summation by parts.
/// Errors: errc::parameter for K < 0, L < -1, or a cube whose tripled cube
/// leaves the box; errc::resolution when the cube is too fine to host a
/// one-sample difference step.
GridFunction spline_atom(const BoxDomain& box, const DyadicCube& q, int K,
                         int L);

/// Synthesis admissibility of a block family for a target space, with n the
/// dimension, (gamma, delta) the space's declared geometry, and
/// (alpha1, alpha2, alpha3) the weight's declared class:
///   L > alpha3 + delta + n - 1 + gamma - n tau + alpha1,
///   K + 1 > alpha2 + n tau,   L + 1 > alpha1,
///   and for molecules N > L + alpha3 + delta + 2n.
/// The momentless route L = -1 is admitted only for star-declared weights
/// under 0 > alpha3 + delta + n + gamma - n tau - alpha1 and alpha1 > n tau.
/// Throws errc::hypothesis on violation.
void require_synthesis_admissible(const BlockSpec& bspec, const SpaceSpec& spec,
                                  int dim);

/// Outcome of a coefficient-times-blocks synthesis.
struct SynthesisReport {
  GridFunction f;
  double coefficient_value = 0.0;  // coefficient_norm of the input
  double space_value = 0.0;        // space_norm of the synthesized function
  double ratio = 0.0;              // space_value / coefficient_value
  bool within_cap = false;
};

/// Sum lambda_{jk} * block(Q_{jk}) over the nonzero coefficients and compare
/// the space norm of the result against the coefficient norm.  The block
/// family must be admissible for the space (errc::hypothesis otherwise).
/// Errors: errc::parameter when cap <= 0 or the coefficient window disagrees
/// with the spec window; errc::alignment on box mismatches.
SynthesisReport synthesize(
    const CoefficientField& lam,
    const std::function<GridFunction(const DyadicCube&)>& block_at,
    const BlockSpec& bspec, const SpaceSpec& spec, const ConvolutionSystem& sys,
    double cap);

/// Coefficient-space norm: materialize each level's piecewise-constant
/// expansion, take the damped shift supremum at the level's own scale with
/// exponent spec.a, and feed the ladder to the scale-matched mixed norm.
/// Errors: errc::parameter when the field's window disagrees with the spec
/// window (plus the space_norm parameter checks).
double coefficient_norm(const CoefficientField& lam, const SpaceSpec& spec);

// --- serialization ----------------------------------------------------------

/// Write the field as JSON lines: a header record carrying the box and
/// window, then one record per nonzero entry (level, corner, re, im) in
/// deterministic key order.
void save_coefficients_jsonl(const CoefficientField& lam,
                             const std::filesystem::path& path);

/// Read a field written by save_coefficients_jsonl.
/// Errors: errc::io on a missing file or malformed records.
CoefficientField load_coefficients_jsonl(const std::filesystem::path& path);

}  // namespace plab
