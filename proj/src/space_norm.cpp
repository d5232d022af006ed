#include "plab/space_norm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

#include "json.hpp"
#include "plab/fft.hpp"

namespace plab {

namespace {

const Scale kAllScales[] = {Scale::besov, Scale::besov_morrey,
                            Scale::triebel_lizorkin,
                            Scale::triebel_lizorkin_morrey};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

// shared preconditions of every ladder construction
void check_analysis(const GridFunction& f, const ConvolutionSystem& sys,
                    const ScaleWindow& window) {
  require(same_box(f.box, sys.box()), errc::alignment,
          "function and analysis system live on different boxes");
  require(sys.window().j_min <= window.j_min &&
              window.j_max <= sys.window().j_max,
          errc::parameter,
          "analysis window [" + std::to_string(window.j_min) + ", " +
              std::to_string(window.j_max) +
              "] is not covered by the system's window");
}

GridFunction weighted_samples(const GridFunction& g, const WeightModel& w,
                              int j) {
  GridFunction out = g;
  for (std::int64_t i = 0; i < out.values.size(); ++i)
    out.values[i] *= w(out.box.point(i), j);
  return out;
}

double least_squares_slope(const std::vector<std::array<double, 2>>& pts) {
  require(pts.size() >= 2, errc::parameter,
          "decay fit needs at least two sample points");
  double sx = 0.0, sy = 0.0;
  for (const auto& p : pts) {
    sx += p[0];
    sy += p[1];
  }
  const double mx = sx / pts.size(), my = sy / pts.size();
  double sxx = 0.0, sxy = 0.0;
  for (const auto& p : pts) {
    sxx += (p[0] - mx) * (p[0] - mx);
    sxy += (p[0] - mx) * (p[1] - my);
  }
  require(sxx > 0.0, errc::parameter, "decay fit abscissae are degenerate");
  return sxy / sxx;
}

// minimal b keeping the m-fold frequency support inside [-1/2, 1/2]
int profile_bandwidth_exponent(int m) {
  int b = 1;
  while (double(m) * std::exp2(-double(m) * b) > 0.5) ++b;
  return b;
}

}  // namespace

MixKind scale_kind(Scale scale) {
  switch (scale) {
    case Scale::besov:
      return MixKind::cube_scale_outer;
    case Scale::besov_morrey:
      return MixKind::scale_outer_cube_sup;
    case Scale::triebel_lizorkin:
      return MixKind::cube_space_outer;
    case Scale::triebel_lizorkin_morrey:
      return MixKind::cube_space_outer_full;
  }
  fail(errc::parameter, "unknown scale");
}

std::string scale_name(Scale scale) {
  switch (scale) {
    case Scale::besov:
      return "besov";
    case Scale::besov_morrey:
      return "besov_morrey";
    case Scale::triebel_lizorkin:
      return "triebel_lizorkin";
    case Scale::triebel_lizorkin_morrey:
      return "triebel_lizorkin_morrey";
  }
  fail(errc::parameter, "unknown scale");
}

Scale parse_scale(const std::string& name) {
  for (Scale s : kAllScales)
    if (scale_name(s) == name) return s;
  fail(errc::parameter, "unknown scale name '" + name + "'");
}

double default_peetre_decay(const FundamentalSpace& space, const WeightModel& w,
                            int dim) {
  return space.params().n0 + w.declared.alpha3 + dim + 1.0;
}

bool peetre_decay_admissible(const SpaceSpec& spec) {
  return spec.a > spec.space.params().n0 + spec.weight.declared.alpha3;
}

void check_space_spec(const SpaceSpec& spec) {
  require(std::isfinite(spec.tau) && spec.tau >= 0.0, errc::parameter,
          "cube exponent tau must be finite and nonnegative");
  require(spec.q > 0.0, errc::parameter,
          "inner exponent q must be positive (infinity allowed)");
  require(std::isfinite(spec.a) && spec.a > 0.0, errc::parameter,
          "damping exponent a must be finite and positive");
  require(spec.window.j_min <= spec.window.j_max, errc::parameter,
          "analysis window is empty");
}

SequenceField maximal_ladder(const GridFunction& f, const ConvolutionSystem& sys,
                             const ScaleWindow& window, double a) {
  require(std::isfinite(a) && a > 0.0, errc::parameter,
          "damping exponent a must be finite and positive");
  check_analysis(f, sys, window);
  SequenceField out;
  out.window = window;
  for (int j = window.j_min; j <= window.j_max; ++j)
    out.levels.emplace(j, damped_sup(sys.convolve(f, j), std::exp2(j), a));
  return out;
}

double space_norm(const GridFunction& f, const SpaceSpec& spec,
                  const ConvolutionSystem& sys) {
  check_space_spec(spec);
  const SequenceField ladder = maximal_ladder(f, sys, spec.window, spec.a);
  return mixed_norm(ladder, scale_kind(spec.scale), spec.space, spec.weight,
                    spec.tau, spec.q);
}

NormFunctional system_norm(const SpaceSpec& spec, const ConvolutionSystem& sys) {
  return [spec, &sys](const GridFunction& f) {
    return space_norm(f, spec, sys);
  };
}

NormFunctional local_mean_norm(const SpaceSpec& spec,
                               const LocalMeanSystem& sys) {
  return [spec, &sys](const GridFunction& f) {
    check_space_spec(spec);
    const WeightClass& c = spec.weight.declared;
    const double threshold = std::max(
        c.alpha1, spec.a + sys.box().dim * spec.tau + c.alpha2);
    require(sys.moment_order() - 1 > threshold, errc::hypothesis,
            "local means need vanishing moments beyond the damping and weight "
            "growth: require " +
                std::to_string(sys.moment_order() - 1) + " > " +
                num(threshold));
    const SequenceField ladder = maximal_ladder(f, sys, spec.window, spec.a);
    return mixed_norm(ladder, scale_kind(spec.scale), spec.space, spec.weight,
                      spec.tau, spec.q);
  };
}

NormFunctional plain_convolution_norm(const SpaceSpec& spec,
                                      const ConvolutionSystem& sys) {
  return [spec, &sys](const GridFunction& f) {
    check_space_spec(spec);
    check_analysis(f, sys, spec.window);
    SequenceField plain;
    plain.window = spec.window;
    for (int j = spec.window.j_min; j <= spec.window.j_max; ++j)
      plain.levels.emplace(j, sys.convolve(f, j));
    return mixed_norm(plain, scale_kind(spec.scale), spec.space, spec.weight,
                      spec.tau, spec.q);
  };
}

EquivalenceReport equivalence_report(
    const std::vector<std::pair<std::string, GridFunction>>& battery,
    const SpaceSpec& spec, const ConvolutionSystem& sys,
    const std::vector<std::pair<std::string, NormFunctional>>& alternatives) {
  EquivalenceReport rep;
  std::map<std::string, std::pair<double, double>> extent;  // min/max ratio
  auto record = [&](const std::string& name, double ratio) {
    auto it = extent.find(name);
    if (it == extent.end()) {
      extent.emplace(name, std::make_pair(ratio, ratio));
    } else {
      it->second.first = std::min(it->second.first, ratio);
      it->second.second = std::max(it->second.second, ratio);
    }
  };

  for (const auto& [id, f] : battery) {
    const double base = space_norm(f, spec, sys);
    EquivalenceRow head;
    head.function_id = id;
    head.characterization = "default";
    head.value = base;
    head.ratio = base > 0.0 ? base / base : 0.0;
    head.ok = true;
    rep.rows.push_back(head);
    if (head.ratio > 0.0) record("default", head.ratio);

    for (const auto& [name, fn] : alternatives) {
      EquivalenceRow row;
      row.function_id = id;
      row.characterization = name;
      try {
        row.value = fn(f);
        row.ok = true;
      } catch (const error& e) {
        if (e.code() != errc::hypothesis) throw;
        row.note = e.what();
      }
      if (row.ok) row.ratio = base > 0.0 ? row.value / base : 0.0;
      rep.rows.push_back(row);
      if (row.ok && row.ratio > 0.0) record(name, row.ratio);
    }
  }

  for (const auto& [name, mm] : extent) rep.spread[name] = mm.second / mm.first;
  return rep;
}

std::string equivalence_tsv(const EquivalenceReport& report) {
  std::string out = "function_id\tcharacterization\tvalue\tratio\n";
  char buf[256];
  for (const EquivalenceRow& row : report.rows) {
    const double value = row.ok ? row.value : std::nan("");
    const double ratio = row.ok ? row.ratio : std::nan("");
    std::snprintf(buf, sizeof(buf), "%s\t%s\t%.12g\t%.12g\n",
                  row.function_id.c_str(), row.characterization.c_str(), value,
                  ratio);
    out += buf;
  }
  return out;
}

std::string equivalence_summary_json(const EquivalenceReport& report) {
  nlohmann::json j;
  int battery = 0;
  for (const EquivalenceRow& row : report.rows)
    if (row.characterization == "default") ++battery;
  j["battery_size"] = battery;
  j["rows"] = report.rows.size();
  j["spread"] = nlohmann::json::object();
  for (const auto& [name, spread] : report.spread) j["spread"][name] = spread;
  return j.dump(2);
}

std::vector<std::pair<std::string, GridFunction>> equivalence_battery(
    const BoxDomain& box, unsigned seed) {
  std::vector<std::pair<std::string, GridFunction>> out;
  const int dim = box.dim;
  const double L = box.half_width;

  auto gauss = [&](double rate, std::array<double, 2> center) {
    return sample(box, [&](std::array<double, 2> x) {
      const double dx = x[0] - center[0];
      const double dy = dim == 2 ? x[1] - center[1] : 0.0;
      return cplx(std::exp(-rate * (dx * dx + dy * dy)), 0.0);
    });
  };
  auto spline = [&](int order) {
    return sample(box, [&](std::array<double, 2> x) {
      double v = centered_bspline(order, x[0]);
      if (dim == 2) v *= centered_bspline(order, x[1]);
      return cplx(v, 0.0);
    });
  };
  auto peak = [&](int m) {
    if (dim == 1) return band_peak_profile(box, m);
    const auto axis = BoxDomain::make(1, box.half_width, box.samples);
    const GridFunction line = band_peak_profile(axis, m);
    GridFunction g(box);
    for (std::int64_t i0 = 0; i0 < box.samples; ++i0)
      for (std::int64_t i1 = 0; i1 < box.samples; ++i1)
        g.values[box.flat(i0, i1)] = line.values[i0] * line.values[i1];
    return g;
  };

  out.emplace_back("gauss_narrow", gauss(8.0, {0.0, 0.0}));
  out.emplace_back("gauss_mid", gauss(2.0, {0.0, 0.0}));
  out.emplace_back("gauss_wide", gauss(0.5, {0.0, 0.0}));
  out.emplace_back("gauss_shifted",
                   gauss(2.0, {1.5, dim == 2 ? 1.5 : 0.0}));
  out.emplace_back("spline_2", spline(2));
  out.emplace_back("spline_4", spline(4));

  // band-limited chirp: a swept oscillation smoothly cut off in frequency
  {
    GridFunction raw = sample(box, [&](std::array<double, 2> x) {
      const double r2 = x[0] * x[0] + x[1] * x[1];
      const double phase = 2.0 * x[0] + 0.25 * x[0] * x[0] +
                           (dim == 2 ? 0.2 * x[1] * x[1] : 0.0);
      return cplx(std::sin(phase) * std::exp(-r2 / 16.0), 0.0);
    });
    const double cutoff = std::min(6.0, 0.5 * M_PI / box.spacing());
    const PlateauProfile taper(1.0, 2.0);
    GridFunction chirp = apply_symbol(raw, [&](std::array<double, 2> xi) {
      const double r = std::hypot(xi[0], xi[1]);
      return cplx(taper(2.0 * r / cutoff), 0.0);
    });
    chirp.values = chirp.values.real().cast<cplx>();
    out.emplace_back("chirp", chirp);
  }

  out.emplace_back("band_peak_1", peak(1));
  out.emplace_back("band_peak_3", peak(3));

  // random band-limited field: white noise pushed through a frequency cutoff
  {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    GridFunction noise(box);
    for (std::int64_t i = 0; i < noise.values.size(); ++i)
      noise.values[i] = cplx(u(rng), 0.0);
    GridFunction g = apply_symbol(noise, [&](std::array<double, 2> xi) {
      const double r = std::hypot(xi[0], xi[1]);
      return cplx(r <= 4.0 ? 1.0 : 0.0, 0.0);
    });
    g.values = g.values.real().cast<cplx>();
    const double sup = g.abs().maxCoeff();
    if (sup > 0.0) g.values /= cplx(sup, 0.0);
    out.emplace_back("random_band", g);
  }

  // smoothly truncated indicator of the unit ball
  {
    const PlateauProfile bump(1.0, 1.5);
    out.emplace_back("smooth_box", sample(box, [&](std::array<double, 2> x) {
                       return cplx(bump(std::hypot(x[0], x[1])), 0.0);
                     }));
  }

  // the same kind of bump translated far from the origin
  {
    const PlateauProfile bump(0.5, 1.5);
    const std::array<double, 2> center = {L / 2.0, 0.0};
    out.emplace_back("far_bump", sample(box, [&](std::array<double, 2> x) {
                       const double dx = x[0] - center[0];
                       const double dy = dim == 2 ? x[1] - center[1] : 0.0;
                       return cplx(bump(std::hypot(dx, dy)), 0.0);
                     }));
  }

  return out;
}

EmbeddingReport embedding_check(const GridFunction& f, const SpaceSpec& spec,
                                const ConvolutionSystem& sys, double q1,
                                double q2) {
  check_space_spec(spec);
  require(q1 > 0.0 && q2 > 0.0 && q1 <= q2, errc::parameter,
          "embedding check needs inner exponents 0 < q1 <= q2");
  const SequenceField ladder = maximal_ladder(f, sys, spec.window, spec.a);
  auto norm_at = [&](Scale s, double q) {
    return mixed_norm(ladder, scale_kind(s), spec.space, spec.weight, spec.tau,
                      q);
  };
  const double guard = 1.0 + 1e-12;

  EmbeddingReport rep;
  rep.all_hold = true;
  auto push = [&](const std::string& label, double lhs, double rhs) {
    EmbeddingReport::Row row;
    row.label = label;
    row.lhs = lhs;
    row.rhs = rhs;
    row.holds = lhs <= rhs * guard;
    rep.all_hold = rep.all_hold && row.holds;
    rep.rows.push_back(row);
  };

  for (Scale s : kAllScales)
    push("q_monotone_" + scale_name(s), norm_at(s, q2), norm_at(s, q1));

  // the truncated level-sup space every scale embeds into
  const double level_sup =
      norm_at(Scale::besov, std::numeric_limits<double>::infinity());
  for (Scale s : kAllScales)
    push("level_sup_into_" + scale_name(s), level_sup, norm_at(s, spec.q));

  return rep;
}

double pointwise_control_ratio(const GridFunction& f, const SpaceSpec& spec,
                               const ConvolutionSystem& sys) {
  check_space_spec(spec);
  const SequenceField ladder = maximal_ladder(f, sys, spec.window, spec.a);
  const SpaceParams& p = spec.space.params();
  const WeightModel star =
      embedding_weight(spec.weight, spec.tau, p.gamma, p.delta);
  double sup = 0.0;
  for (const auto& [j, g] : ladder.levels) {
    for (std::int64_t i = 0; i < g.values.size(); ++i)
      sup = std::max(sup, star(g.box.point(i), j) * std::abs(g.values[i]));
  }
  const double den = mixed_norm(ladder, scale_kind(spec.scale), spec.space,
                                spec.weight, spec.tau, spec.q);
  return den > 0.0 ? sup / den : 0.0;
}

MaximalBoundReport check_scaled_maximal_bound(const FundamentalSpace& space,
                                              const WeightModel& w,
                                              const BoxDomain& box,
                                              const ScaleWindow& window,
                                              double r, double lambda,
                                              double cap) {
  require(r > 0.0 && std::isfinite(r), errc::parameter,
          "maximal-bound exponent r must be positive");
  require(lambda > box.dim, errc::parameter,
          "maximal-bound tail exponent must exceed the dimension");
  require(cap > 0.0, errc::parameter, "maximal-bound cap must be positive");

  const PlateauProfile bump(1.0, 1.5);
  const std::array<double, 2> shift = {1.5, box.dim == 2 ? 1.5 : 0.0};
  const std::vector<GridFunction> probes = {
      sample(box,
             [](std::array<double, 2> x) {
               return cplx(std::exp(-2.0 * (x[0] * x[0] + x[1] * x[1])), 0.0);
             }),
      sample(box,
             [&](std::array<double, 2> x) {
               return cplx(bump(std::hypot(x[0], x[1])), 0.0);
             }),
      sample(box, [&](std::array<double, 2> x) {
        const double dx = x[0] - shift[0], dy = x[1] - shift[1];
        return cplx(std::exp(-(dx * dx + dy * dy)), 0.0);
      })};

  MaximalBoundReport rep;
  rep.cap = cap;
  for (const GridFunction& f : probes) {
    for (int j = window.j_min; j <= window.j_max; ++j) {
      const double lhs = space(weighted_samples(windowed_maximal(f, j, r, lambda), w, j));
      const double rhs = space(weighted_samples(f, w, j));
      require(rhs > 0.0, errc::degenerate_ball,
              "maximal-bound probe has zero weighted norm");
      const double ratio = lhs / rhs;
      rep.ratios.push_back(ratio);
      rep.worst_ratio = std::max(rep.worst_ratio, ratio);
    }
  }
  rep.pass = rep.worst_ratio <= cap;
  return rep;
}

double centered_bspline(int order, double t) {
  require(order >= 1, errc::parameter, "b-spline order must be at least 1");
  if (order == 1) return (t >= -0.5 && t < 0.5) ? 1.0 : 0.0;
  // (1/(m-1)!) sum_k (-1)^k C(m,k) (t + m/2 - k)_+^{m-1}
  double fact = 1.0;
  for (int i = 2; i < order; ++i) fact *= i;
  double binom = 1.0, acc = 0.0, sign = 1.0;
  for (int k = 0; k <= order; ++k) {
    const double arg = t + order / 2.0 - k;
    if (arg > 0.0) acc += sign * binom * std::pow(arg, order - 1);
    sign = -sign;
    binom = binom * (order - k) / (k + 1);
  }
  return std::max(0.0, acc / fact);
}

GridFunction band_peak_profile(const BoxDomain& box, int m) {
  require(box.dim == 1, errc::parameter,
          "the band-concentrated profile is one-dimensional");
  require(m >= 1, errc::parameter, "profile order must be at least 1");
  require(M_PI / box.spacing() > 0.5, errc::resolution,
          "grid too coarse to carry the profile's frequency band");

  const int b = profile_bandwidth_exponent(m);
  const double c = std::exp2(-double(m) * b);
  const double amp =
      2.0 * M_PI * std::pow(2.0 * c, m - 1) / box.spacing();
  const Eigen::ArrayXd phase = center_phase(box);
  Eigen::ArrayXcd spectrum(box.total());
  for (std::int64_t i = 0; i < box.total(); ++i) {
    const double xi = frequency_point(box, i)[0];
    spectrum(i) =
        cplx(amp * centered_bspline(m, xi / (2.0 * c)) * phase(i), 0.0);
  }
  return dft_inverse(box, spectrum);
}

DecayWitnessReport band_peak_decay_witness(int m, double a, double p,
                                           double q) {
  require(m >= 1, errc::parameter, "witness order must be at least 1");
  require(std::isfinite(a) && a > 0.0, errc::parameter,
          "witness damping exponent must be positive");
  require(p > 0.0 && std::isfinite(p), errc::parameter,
          "witness integrability exponent must be positive");
  require(q > 0.0, errc::parameter, "witness inner exponent must be positive");

  DecayWitnessReport rep;
  rep.m = m;
  rep.a = a;
  rep.p = p;
  rep.expected_exponent = std::max(-a, -double(m));
  rep.expected_finite = p * std::min(a, double(m)) > 1.0;

  const int b = profile_bandwidth_exponent(m);
  const double c = std::exp2(-double(m) * b);

  // --- decay fit on one wide, unit-spaced box --------------------------------
  {
    const auto fit_box = BoxDomain::make(1, 1024.0, 4096);
    const double L = fit_box.half_width;
    const GridFunction prof = band_peak_profile(fit_box, m);
    const GridFunction field = damped_sup(prof, 1.0, a);
    const double center_amp =
        std::abs(prof.values[fit_box.samples / 2]);  // profile value at x = 0

    // the field is probed where the oscillation reaches its envelope exactly
    auto envelope = [&](double x) { return std::pow(2.0 / x, m); };
    auto center_tail = [&](double x) {
      return center_amp * std::pow(1.0 + x, -a);
    };
    const double env_hi = std::min(L / 4.0, 2.0 * L * std::pow(0.03, 1.0 / m));

    auto collect = [&](bool filtered) {
      std::vector<std::array<double, 2>> pts;
      for (int k = 0;; ++k) {
        const double x = (M_PI / 2.0 + k * M_PI) / c;
        if (x >= L / 2.0) break;
        bool keep;
        if (!filtered) {
          keep = x >= 32.0 && x <= env_hi;
        } else if (std::abs(a - m) <= 0.5) {
          // parallel regimes: any mix shares the slope
          keep = x >= 32.0 && x <= env_hi;
        } else if (a > m) {
          keep = x >= std::max(32.0, 4.0 / c) && x <= env_hi &&
                 envelope(x) >= 20.0 * center_tail(x);
        } else {
          keep = center_tail(x) >= 20.0 * envelope(x);
        }
        if (!keep) continue;
        const std::int64_t i = std::lround((x + L) / fit_box.spacing());
        if (i < 0 || i >= fit_box.samples) continue;
        const double v = std::abs(field.values[i]);
        if (v <= 0.0) continue;
        pts.push_back({std::log1p(fit_box.coord(i)), std::log(v)});
      }
      return pts;
    };

    std::vector<std::array<double, 2>> pts = collect(true);
    if (pts.size() < 4) pts = collect(false);
    rep.fitted_exponent = least_squares_slope(pts);
  }

  // --- growth of the level-sum norm over doubling boxes ----------------------
  for (double L : {32.0, 64.0, 128.0}) {
    const int samples = static_cast<int>(std::lround(32.0 * L));  // h = 1/16
    const auto gbox = BoxDomain::make(1, L, samples);
    const auto gwin = make_scale_window(gbox, 0, 2);
    const auto gsys = build_band_system(gbox, gwin);
    const GridFunction gf = band_peak_profile(gbox, m);
    const SequenceField ladder = maximal_ladder(gf, gsys, gwin, a);

    // the profile is band-limited below every band level
    rep.base_sup = ladder.levels.at(0).abs().maxCoeff();
    for (int j = 1; j <= gwin.j_max; ++j)
      rep.high_sup =
          std::max(rep.high_sup, ladder.levels.at(j).abs().maxCoeff());

    rep.half_widths.push_back(L);
    rep.norms.push_back(mixed_norm(ladder, MixKind::scale_outer,
                                   lebesgue(1, p), power_weight(0.0), 0.0, q));
  }
  for (std::size_t i = 0; i + 1 < rep.norms.size(); ++i)
    rep.growth_rates.push_back(std::log2(rep.norms[i + 1] / rep.norms[i]));
  rep.stabilizes = !rep.growth_rates.empty() && rep.growth_rates.back() <= 0.15;
  return rep;
}

}  // namespace plab
