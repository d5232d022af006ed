#pragma once

// Mixed quasi-norms over ladders of grid functions indexed by dyadic level.
// Six compositions of three ingredients are provided: a per-level weight
// w_j, an l^q aggregation across levels, and (for the cube-localized kinds)
// a supremum over dyadic cubes P with volume penalty |P|^-tau and inner
// levels truncated at the cube's own level.  On top of the norms sit three
// derived constructions: a geometric cross-level mixing operator (whose
// boundedness has a window-stable constant), a large-tau collapse that
// trades the cube supremum for a rescaled weight, and a witness ladder of
// shrinking cube indicators separating the two scale-outer cube norms.

#include <complex>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>

#include "plab/grid.hpp"
#include "plab/spaces.hpp"
#include "plab/weights.hpp"

namespace plab {

/// A finite ladder of grid functions, one per level of the window.  Every
/// level in [window.j_min, window.j_max] must be present and all levels must
/// share one box; values must be finite.
struct SequenceField {
  ScaleWindow window;
  std::map<int, GridFunction> levels;
};

/// The six ways of combining weight, levels, space norm and cube supremum.
/// Writing h_j = w_j g_j and lq for the l^q aggregation across levels
/// (suprema when q = infinity):
///   space_outer            ||  lq_j |h_j|  ||_L                (tau = 0 only)
///   scale_outer            lq_j || h_j ||_L                    (tau = 0 only)
///   cube_space_outer       sup_P |P|^-tau || chi_P lq_{j>=j_P} |h_j| ||_L
///   cube_space_outer_full  sup_P |P|^-tau || chi_P lq_j |h_j| ||_L
///   cube_scale_outer       sup_P |P|^-tau lq_{j>=j_P} || chi_P h_j ||_L
///   scale_outer_cube_sup   lq_j sup_P |P|^-tau || chi_P h_j ||_L
/// The truncation "j >= j_P" starts the level range at the cube's own level
/// (never below the window minimum, and never below 0 unless the weight is
/// declared homogeneous).
enum class MixKind {
  space_outer,
  scale_outer,
  cube_space_outer,
  cube_space_outer_full,
  cube_scale_outer,
  scale_outer_cube_sup,
};

/// Evaluate one of the six mixed quasi-norms.
///
/// The cube supremum runs over every dyadic cube of levels
/// [-log2(period), window.j_max] that meets the box, plus synthetic
/// whole-box covers at each level up to window.j_min (the discrete stand-in
/// for arbitrarily large cubes containing the support).  |P|^tau is the
/// exact dyadic volume 2^(-level * dim * tau).  The supremum is taken in
/// enumeration order, so results are deterministic.
///
/// Errors: errc::parameter for tau < 0, tau > 0 with an untruncated kind,
/// q <= 0 or NaN, a missing level, non-finite samples, or a window reaching
/// below level 0 with a non-homogeneous weight; errc::alignment when levels
/// disagree on the box.
double mixed_norm(const SequenceField& G, MixKind kind,
                  const FundamentalSpace& space, const WeightModel& w,
                  double tau, double q);

/// Cross-level geometric mixing: each output level gathers every input
/// level, damped by 2^(-gap * d_coarse) from coarser sources (nu <= j) and
/// by 2^(-gap * d_fine) from finer sources (nu > j):
///   G_j = sum_{nu <= j} 2^(-(j-nu) d_coarse) g_nu
///       + sum_{nu >  j} 2^(-(nu-j) d_fine)   g_nu.
/// With d_fine above the weight's decay exponent and d_coarse above
/// dim*tau plus the weight's growth exponent, every mixed norm of the
/// output is bounded by a constant times that of the input, with the
/// constant stable as the window grows.
SequenceField geometric_mix(const SequenceField& G, double d_fine,
                            double d_coarse);

/// Sparse coefficients on dyadic cubes: one complex value per (level,
/// corner-index) pair.  Cubes within one level are disjoint, so the
/// piecewise-constant expansion sum_k lambda_{jk} chi_{Q_{jk}} is well
/// defined; entries whose cubes miss the box contribute nothing.
struct CoefficientField {
  BoxDomain box;
  ScaleWindow window;
  std::map<std::pair<int, std::array<std::int64_t, 2>>, cplx> entries;
};

/// The level-j piecewise-constant expansion of the coefficients.
/// Errors: errc::parameter when j lies outside the window.
GridFunction coefficient_layer(const CoefficientField& lam, int j);

/// Damped shift supremum at scale `level` with decay `a`:
///   out(x) = sup_y |f(x + y)| (1 + 2^level |y|)^-a,
/// the shift y running over the grid with minimal-image periodic distance.
/// Errors: errc::parameter for a <= 0.
GridFunction damped_shift_sup(const GridFunction& f, int level, double a);

/// Estimate of the exponent at which indicator norms shrink with the cube
/// level: the largest value of  -log2 ||chi_P||_L / (dim * j)  over cubes P
/// at the top two levels of the window (a tail proxy for the limiting
/// supremum).  For the plain p-integral norm this equals 1/p exactly.
/// Errors: errc::parameter when the window top is below level 1.
double collapse_index(const FundamentalSpace& space, const BoxDomain& box,
                      const ScaleWindow& window);

/// Large-tau collapse comparison.  lhs is the cube_space_outer mixed norm
/// (with inner exponent q) of the damped shift envelopes of the coefficient
/// layers; rhs evaluates the same envelopes against the rescaled weight
/// 2^(j dim (tau - collapse_index)) w_j with a plain sup over levels and
/// samples.  The two agree up to window-stable constants whenever
/// tau > collapse_index; both scale linearly in the coefficients.
/// Errors: errc::hypothesis when tau <= the estimated collapse index;
/// errc::parameter for a <= 0, q <= 0, tau < 0, or entries outside the
/// window.
std::pair<double, double> tau_collapse_compare(const CoefficientField& lam,
                                               const FundamentalSpace& space,
                                               const WeightModel& w, double tau,
                                               double q, double a);

/// Witness ladder separating the two scale-outer cube norms: on each level
/// j in [0, levels] put the indicator of the cube [2^-j, 2^(1-j))^dim scaled
/// by |R_j|^tau / ||w_j chi_{R_j}||_L (levels whose cube misses the box are
/// left zero).  Returns {cube_scale_outer norm, scale_outer_cube_sup norm}:
/// the first stays bounded as the ladder grows while the second grows like
/// (number of active levels)^(1/q).
/// Errors: errc::parameter for q <= 0, tau < 0, levels < 1, or no ladder
/// cube meeting the box; errc::resolution when the grid cannot carry level
/// `levels`.
std::pair<double, double> proper_subspace_witness(const FundamentalSpace& space,
                                                  const WeightModel& w,
                                                  const BoxDomain& box,
                                                  double tau, double q,
                                                  int levels);

// --- serialization ----------------------------------------------------------

/// Write the field as one grid file per level (level_<j>.grid) plus a
/// manifest.json recording the window and the names of the space and weight
/// the field is meant to be measured against.
void save_sequence_field(const SequenceField& G,
                         const std::filesystem::path& dir,
                         const std::string& space_name,
                         const std::string& weight_name);

/// Read a field written by save_sequence_field.  The recorded space/weight
/// names are returned through the optional out-pointers.
/// Errors: errc::io on missing or malformed manifest or grid files.
SequenceField load_sequence_field(const std::filesystem::path& dir,
                                  std::string* space_name = nullptr,
                                  std::string* weight_name = nullptr);

}  // namespace plab
