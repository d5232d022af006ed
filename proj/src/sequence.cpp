#include "plab/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "plab/errors.hpp"

namespace plab {
namespace {

using Eigen::ArrayXd;

std::string num(int v) { return std::to_string(v); }

/// Validate the ladder (levels present, one box, finite samples) and return
/// the shared box.
const BoxDomain& validated_box(const SequenceField& G) {
  auto first = G.levels.find(G.window.j_min);
  require(first != G.levels.end(), errc::parameter,
          "sequence field is missing level " + num(G.window.j_min));
  const BoxDomain& box = first->second.box;
  for (int j = G.window.j_min; j <= G.window.j_max; ++j) {
    auto it = G.levels.find(j);
    require(it != G.levels.end(), errc::parameter,
            "sequence field is missing level " + num(j));
    require(same_box(it->second.box, box), errc::alignment,
            "sequence field levels disagree on the box");
    require(it->second.values.size() == box.total(), errc::alignment,
            "sequence field level " + num(j) + " has the wrong sample count");
    require(it->second.values.allFinite(), errc::parameter,
            "sequence field has non-finite samples at level " + num(j));
  }
  return box;
}

/// l^q combination of nonnegative terms; q = infinity takes the sup.
double lq_combine(const std::vector<double>& terms, double q) {
  if (std::isinf(q)) {
    double best = 0.0;
    for (double t : terms) best = std::max(best, t);
    return best;
  }
  double acc = 0.0;
  for (double t : terms) acc += std::pow(t, q);
  return std::pow(acc, 1.0 / q);
}

/// Positive finite weight samples at one level.
ArrayXd weight_samples(const BoxDomain& box, const WeightModel& w, int j) {
  ArrayXd out(box.total());
  for (std::int64_t i = 0; i < box.total(); ++i) {
    const double v = w(box.point(i), j);
    require(std::isfinite(v) && v > 0.0, errc::parameter,
            "weight '" + w.name + "' must be positive and finite at level " +
                num(j));
    out(i) = v;
  }
  return out;
}

ArrayXd index_box_mask(const BoxDomain& box, const IndexBox& ib) {
  ArrayXd m = ArrayXd::Zero(box.total());
  if (ib.empty(box.dim)) return m;
  if (box.dim == 1) {
    for (std::int64_t i = ib.lo[0]; i < ib.hi[0]; ++i) m(i) = 1.0;
  } else {
    for (std::int64_t i0 = ib.lo[0]; i0 < ib.hi[0]; ++i0)
      for (std::int64_t i1 = ib.lo[1]; i1 < ib.hi[1]; ++i1)
        m(box.flat(i0, i1)) = 1.0;
  }
  return m;
}

/// One participant of the cube supremum: its sample range, the exact dyadic
/// volume penalty |P|^-tau, and whether it covers the whole box (covers skip
/// the mask multiply, an exact identity).
struct CubeEntry {
  int level = 0;
  double penalty = 1.0;
  bool cover = false;
  IndexBox ib;
};

/// Every dyadic cube of levels [-log2(period), j_hi] meeting the box, after
/// synthetic whole-box covers at each level up to j_lo (the finite stand-in
/// for arbitrarily large cubes containing the support).  Enumeration order
/// is deterministic: covers by level, then cubes lexicographically.  Masks
/// are not materialized here; evaluation reuses one buffer per loop.
std::vector<CubeEntry> cube_entries(const BoxDomain& box, int j_lo, int j_hi,
                                    double tau) {
  const int dim = box.dim;
  const int level_box =
      -static_cast<int>(std::lround(std::log2(box.period())));
  std::vector<CubeEntry> entries;
  for (int l = level_box; l <= j_lo; ++l)
    entries.push_back(
        {l, std::exp2(static_cast<double>(l * dim) * tau), true, IndexBox{}});
  for (const DyadicCube& qc : enumerate_cubes(box, level_box, j_hi)) {
    IndexBox ib = cube_index_box(box, qc);
    if (ib.empty(dim)) continue;
    entries.push_back(
        {qc.level, std::exp2(static_cast<double>(qc.level * dim) * tau), false,
         ib});
  }
  return entries;
}

/// Write `value` over the index range of `ib` (O(range), not O(box)).
void paint_range(ArrayXd& buf, const BoxDomain& box, const IndexBox& ib,
                 double value) {
  if (box.dim == 1) {
    for (std::int64_t i = ib.lo[0]; i < ib.hi[0]; ++i) buf(i) = value;
  } else {
    for (std::int64_t i0 = ib.lo[0]; i0 < ib.hi[0]; ++i0)
      for (std::int64_t i1 = ib.lo[1]; i1 < ib.hi[1]; ++i1)
        buf(box.flat(i0, i1)) = value;
  }
}

}  // namespace

double mixed_norm(const SequenceField& G, MixKind kind,
                  const FundamentalSpace& space, const WeightModel& w,
                  double tau, double q) {
  require(std::isfinite(tau) && tau >= 0.0, errc::parameter,
          "mixed_norm needs tau in [0, inf)");
  require(q > 0.0, errc::parameter, "mixed_norm needs q in (0, inf]");
  const BoxDomain& box = validated_box(G);
  require(w.homogeneous || G.window.j_min >= 0, errc::parameter,
          "a window reaching below level 0 needs a homogeneous weight");
  const bool truncated =
      kind != MixKind::space_outer && kind != MixKind::scale_outer;
  require(truncated || tau == 0.0, errc::parameter,
          "tau > 0 requires a cube-truncated kind");

  const int j_lo = G.window.j_min;
  const int j_hi = G.window.j_max;
  const int count = G.window.count();

  // Weighted level magnitudes h_j = w_j |g_j|.
  std::vector<ArrayXd> h(count);
  for (int j = j_lo; j <= j_hi; ++j)
    h[j - j_lo] = weight_samples(box, w, j) * G.levels.at(j).abs();

  // Suffix aggregates s[i] = l^q of the levels from j_lo + i upward.
  std::vector<ArrayXd> s(count);
  if (std::isinf(q)) {
    s[count - 1] = h[count - 1];
    for (int i = count - 2; i >= 0; --i) s[i] = h[i].max(s[i + 1]);
  } else {
    ArrayXd acc = ArrayXd::Zero(box.total());
    for (int i = count - 1; i >= 0; --i) {
      acc += h[i].pow(q);
      s[i] = acc.pow(1.0 / q);
    }
  }

  auto norm_of = [&](const ArrayXd& vals) {
    GridFunction g{box};
    g.values = vals.cast<cplx>();
    return space(g);
  };

  switch (kind) {
    case MixKind::space_outer:
      return norm_of(s[0]);
    case MixKind::scale_outer: {
      std::vector<double> terms(count);
      for (int i = 0; i < count; ++i) terms[i] = norm_of(h[i]);
      return lq_combine(terms, q);
    }
    default:
      break;
  }

  const std::vector<CubeEntry> entries = cube_entries(box, j_lo, j_hi, tau);
  ArrayXd mask = ArrayXd::Zero(box.total());
  auto masked_norm = [&](const CubeEntry& e, const ArrayXd& vals) {
    if (e.cover) return norm_of(vals);
    return norm_of(vals * mask);
  };
  double best = 0.0;
  switch (kind) {
    case MixKind::cube_space_outer:
      for (const CubeEntry& e : entries) {
        const int start = std::max(e.level, j_lo);
        if (start > j_hi) continue;
        if (!e.cover) paint_range(mask, box, e.ib, 1.0);
        best = std::max(best, e.penalty * masked_norm(e, s[start - j_lo]));
        if (!e.cover) paint_range(mask, box, e.ib, 0.0);
      }
      return best;
    case MixKind::cube_space_outer_full:
      for (const CubeEntry& e : entries) {
        if (!e.cover) paint_range(mask, box, e.ib, 1.0);
        best = std::max(best, e.penalty * masked_norm(e, s[0]));
        if (!e.cover) paint_range(mask, box, e.ib, 0.0);
      }
      return best;
    case MixKind::cube_scale_outer:
      for (const CubeEntry& e : entries) {
        const int start = std::max(e.level, j_lo);
        if (start > j_hi) continue;
        if (!e.cover) paint_range(mask, box, e.ib, 1.0);
        std::vector<double> terms;
        terms.reserve(j_hi - start + 1);
        for (int j = start; j <= j_hi; ++j)
          terms.push_back(masked_norm(e, h[j - j_lo]));
        best = std::max(best, e.penalty * lq_combine(terms, q));
        if (!e.cover) paint_range(mask, box, e.ib, 0.0);
      }
      return best;
    default: {  // scale_outer_cube_sup
      std::vector<double> terms(count, 0.0);
      for (const CubeEntry& e : entries) {
        if (!e.cover) paint_range(mask, box, e.ib, 1.0);
        for (int i = 0; i < count; ++i)
          terms[i] = std::max(terms[i], e.penalty * masked_norm(e, h[i]));
        if (!e.cover) paint_range(mask, box, e.ib, 0.0);
      }
      return lq_combine(terms, q);
    }
  }
}

SequenceField geometric_mix(const SequenceField& G, double d_fine,
                            double d_coarse) {
  require(std::isfinite(d_fine) && std::isfinite(d_coarse), errc::parameter,
          "geometric_mix needs finite damping exponents");
  const BoxDomain& box = validated_box(G);
  SequenceField out;
  out.window = G.window;
  for (int j = G.window.j_min; j <= G.window.j_max; ++j) {
    GridFunction g{box};
    for (int nu = G.window.j_min; nu <= G.window.j_max; ++nu) {
      const double c = nu <= j
                           ? std::exp2(-static_cast<double>(j - nu) * d_coarse)
                           : std::exp2(-static_cast<double>(nu - j) * d_fine);
      g.values += c * G.levels.at(nu).values;
    }
    out.levels.emplace(j, std::move(g));
  }
  return out;
}

GridFunction coefficient_layer(const CoefficientField& lam, int j) {
  require(j >= lam.window.j_min && j <= lam.window.j_max, errc::parameter,
          "coefficient level " + num(j) + " lies outside the window");
  GridFunction out{lam.box};
  const std::array<std::int64_t, 2> kmin = {
      std::numeric_limits<std::int64_t>::min(),
      std::numeric_limits<std::int64_t>::min()};
  for (auto it = lam.entries.lower_bound({j, kmin});
       it != lam.entries.end() && it->first.first == j; ++it) {
    require(std::isfinite(it->second.real()) && std::isfinite(it->second.imag()),
            errc::parameter, "coefficient values must be finite");
    const DyadicCube qc{j, it->first.second};
    const IndexBox ib = cube_index_box(lam.box, qc);
    if (ib.empty(lam.box.dim)) continue;
    if (lam.box.dim == 1) {
      for (std::int64_t i = ib.lo[0]; i < ib.hi[0]; ++i)
        out.values(i) = it->second;
    } else {
      for (std::int64_t i0 = ib.lo[0]; i0 < ib.hi[0]; ++i0)
        for (std::int64_t i1 = ib.lo[1]; i1 < ib.hi[1]; ++i1)
          out.values(lam.box.flat(i0, i1)) = it->second;
    }
  }
  return out;
}

GridFunction damped_shift_sup(const GridFunction& f, int level, double a) {
  require(a > 0.0, errc::parameter, "damped_shift_sup needs decay a > 0");
  require(f.values.allFinite(), errc::parameter,
          "damped_shift_sup needs finite samples");
  const BoxDomain& box = f.box;
  const std::int64_t n = box.samples;
  const std::int64_t total = box.total();
  const double h = box.spacing();
  const double scale = std::exp2(static_cast<double>(level));
  const ArrayXd af = f.abs();

  // Damping factor per flat shift offset (minimal-image distance).
  ArrayXd kappa(total);
  for (std::int64_t o = 0; o < total; ++o) {
    const auto oi = box.unflat(o);
    double r2 = 0.0;
    for (int d = 0; d < box.dim; ++d) {
      const std::int64_t sd = oi[d] <= n / 2 ? oi[d] : oi[d] - n;
      const double y = static_cast<double>(sd) * h;
      r2 += y * y;
    }
    kappa(o) = std::pow(1.0 + scale * std::sqrt(r2), -a);
  }

  GridFunction out{box};
  if (box.dim == 1) {
    for (std::int64_t x = 0; x < total; ++x) {
      double best = 0.0;
      for (std::int64_t o = 0; o < total; ++o) {
        const std::int64_t t = x + o < total ? x + o : x + o - total;
        best = std::max(best, af(t) * kappa(o));
      }
      out.values(x) = best;
    }
  } else {
    for (std::int64_t x = 0; x < total; ++x) {
      const auto xi = box.unflat(x);
      double best = 0.0;
      for (std::int64_t o = 0; o < total; ++o) {
        const auto oi = box.unflat(o);
        const std::int64_t t0 =
            xi[0] + oi[0] < n ? xi[0] + oi[0] : xi[0] + oi[0] - n;
        const std::int64_t t1 =
            xi[1] + oi[1] < n ? xi[1] + oi[1] : xi[1] + oi[1] - n;
        best = std::max(best, af(box.flat(t0, t1)) * kappa(o));
      }
      out.values(x) = best;
    }
  }
  return out;
}

double collapse_index(const FundamentalSpace& space, const BoxDomain& box,
                      const ScaleWindow& window) {
  require(window.j_max >= 1, errc::parameter,
          "collapse_index needs the window to reach level 1");
  const int top = window.j_max;
  const int lo = std::max(1, top - 1);
  double best = -std::numeric_limits<double>::infinity();
  for (int j = lo; j <= top; ++j) {
    for (const DyadicCube& qc : enumerate_cubes(box, j, j)) {
      const IndexBox ib = cube_index_box(box, qc);
      if (ib.empty(box.dim)) continue;
      GridFunction g{box};
      g.values = index_box_mask(box, ib).cast<cplx>();
      const double v = space(g);
      if (v > 0.0)
        best = std::max(best, -std::log2(v) / static_cast<double>(box.dim * j));
    }
  }
  require(std::isfinite(best), errc::parameter,
          "collapse_index found no usable cube");
  return best;
}

std::pair<double, double> tau_collapse_compare(const CoefficientField& lam,
                                               const FundamentalSpace& space,
                                               const WeightModel& w, double tau,
                                               double q, double a) {
  require(a > 0.0, errc::parameter, "tau_collapse_compare needs a > 0");
  require(q > 0.0, errc::parameter, "tau_collapse_compare needs q > 0");
  require(std::isfinite(tau) && tau >= 0.0, errc::parameter,
          "tau_collapse_compare needs tau in [0, inf)");
  for (const auto& [key, value] : lam.entries) {
    (void)value;
    require(key.first >= lam.window.j_min && key.first <= lam.window.j_max,
            errc::parameter, "coefficient level " + num(key.first) +
                                 " lies outside the window");
  }

  const double tt = collapse_index(space, lam.box, lam.window);
  require(tau > tt, errc::hypothesis,
          "tau collapse needs tau above the collapse index (estimated " +
              std::to_string(tt) + ")");

  SequenceField G;
  G.window = lam.window;
  for (int j = lam.window.j_min; j <= lam.window.j_max; ++j)
    G.levels.emplace(j, damped_shift_sup(coefficient_layer(lam, j), j, a));

  const double lhs =
      mixed_norm(G, MixKind::cube_space_outer, space, w, tau, q);

  const WeightModel wt = tau_shift_weight(w, lam.box.dim, tau, tt);
  double rhs = 0.0;
  for (int j = lam.window.j_min; j <= lam.window.j_max; ++j) {
    ArrayXd ws(lam.box.total());
    for (std::int64_t i = 0; i < lam.box.total(); ++i)
      ws(i) = wt(lam.box.point(i), j);
    rhs = std::max(rhs, (ws * G.levels.at(j).abs()).maxCoeff());
  }
  return {lhs, rhs};
}

std::pair<double, double> proper_subspace_witness(
    const FundamentalSpace& space, const WeightModel& w, const BoxDomain& box,
    double tau, double q, int levels) {
  require(levels >= 1, errc::parameter,
          "proper_subspace_witness needs at least one level");
  require(q > 0.0, errc::parameter, "proper_subspace_witness needs q > 0");
  require(std::isfinite(tau) && tau >= 0.0, errc::parameter,
          "proper_subspace_witness needs tau in [0, inf)");

  SequenceField G;
  G.window = make_scale_window(box, 0, levels);
  int active = 0;
  for (int j = 0; j <= levels; ++j) {
    DyadicCube rj{j, {1, 1}};
    const IndexBox ib = cube_index_box(box, rj);
    GridFunction g{box};
    if (!ib.empty(box.dim)) {
      const ArrayXd mask = index_box_mask(box, ib);
      GridFunction wm{box};
      wm.values = (weight_samples(box, w, j) * mask).cast<cplx>();
      const double denom = space(wm);
      require(denom > 0.0, errc::parameter,
              "witness cube at level " + num(j) + " has zero norm");
      const double lam =
          std::exp2(-static_cast<double>(j * box.dim) * tau) / denom;
      g.values = (lam * mask).cast<cplx>();
      ++active;
    }
    G.levels.emplace(j, std::move(g));
  }
  require(active >= 1, errc::parameter, "no witness cube meets the box");

  const double b = mixed_norm(G, MixKind::cube_scale_outer, space, w, tau, q);
  const double nn =
      mixed_norm(G, MixKind::scale_outer_cube_sup, space, w, tau, q);
  return {b, nn};
}

void save_sequence_field(const SequenceField& G,
                         const std::filesystem::path& dir,
                         const std::string& space_name,
                         const std::string& weight_name) {
  validated_box(G);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  require(!ec, errc::io, "cannot create directory " + dir.string());

  nlohmann::json manifest;
  manifest["window"] = {{"j_min", G.window.j_min}, {"j_max", G.window.j_max}};
  manifest["space"] = space_name;
  manifest["weight"] = weight_name;
  for (int j = G.window.j_min; j <= G.window.j_max; ++j)
    write_grid_file(dir / ("level_" + num(j) + ".grid"), G.levels.at(j));

  std::ofstream out(dir / "manifest.json");
  require(out.good(), errc::io,
          "cannot write manifest in " + dir.string());
  out << manifest.dump(2) << "\n";
  require(out.good(), errc::io, "failed writing manifest in " + dir.string());
}

SequenceField load_sequence_field(const std::filesystem::path& dir,
                                  std::string* space_name,
                                  std::string* weight_name) {
  std::ifstream in(dir / "manifest.json");
  require(in.good(), errc::io, "cannot open manifest in " + dir.string());
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception&) {
    fail(errc::io, "malformed manifest in " + dir.string());
  }
  require(manifest.is_object() && manifest.contains("window") &&
              manifest["window"].is_object() &&
              manifest["window"].contains("j_min") &&
              manifest["window"].contains("j_max") &&
              manifest.contains("space") && manifest["space"].is_string() &&
              manifest.contains("weight") && manifest["weight"].is_string(),
          errc::io, "manifest in " + dir.string() + " is missing fields");

  SequenceField G;
  int j_min = 0, j_max = 0;
  try {
    j_min = manifest["window"]["j_min"].get<int>();
    j_max = manifest["window"]["j_max"].get<int>();
  } catch (const nlohmann::json::exception&) {
    fail(errc::io, "manifest window in " + dir.string() + " is malformed");
  }
  require(j_min <= j_max, errc::io,
          "manifest window in " + dir.string() + " is empty");
  G.window = ScaleWindow{j_min, j_max};
  for (int j = j_min; j <= j_max; ++j)
    G.levels.emplace(j, read_grid_file(dir / ("level_" + num(j) + ".grid")));
  try {
    validated_box(G);
  } catch (const error&) {
    fail(errc::io, "grid files in " + dir.string() + " are inconsistent");
  }
  if (space_name) *space_name = manifest["space"].get<std::string>();
  if (weight_name) *weight_name = manifest["weight"].get<std::string>();
  return G;
}

}  // namespace plab
