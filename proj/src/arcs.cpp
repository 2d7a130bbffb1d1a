#include "minicubes/arcs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "adaptive.hpp"
#include "minicubes/accumulate.hpp"
#include "minicubes/errors.hpp"
#include "minicubes/exp_sums.hpp"
#include "minicubes/oscillatory.hpp"
#include "minicubes/parallel.hpp"
#include "minicubes/simd.hpp"
#include "roots.hpp"

namespace minicubes {

ArcStyle parse_arc_style(const std::string& s) {
  if (s == "P") return ArcStyle::P;
  if (s == "M") return ArcStyle::M;
  if (s == "N") return ArcStyle::N;
  throw PreconditionError("unknown arc style '" + s + "' (expected P, M or N)");
}

std::string arc_style_name(ArcStyle s) {
  switch (s) {
    case ArcStyle::P:
      return "P";
    case ArcStyle::M:
      return "M";
    case ArcStyle::N:
      return "N";
  }
  return "?";
}

namespace {

double circle_distance(double alpha, double center) {
  double d = std::fabs(alpha - center);
  d -= std::floor(d);
  return std::min(d, 1.0 - d);
}

}  // namespace

ArcDissection ArcDissection::build(ArcStyle style, const Parameters& params,
                                   std::optional<double> cutoff) {
  ArcDissection d;
  d.style_ = style;
  d.params_ = params;
  const double P3 = params.P * params.P * params.P;
  switch (style) {
    case ArcStyle::P:
      d.cutoff_ = cutoff.value_or(params.L);
      break;
    case ArcStyle::M:
      d.cutoff_ = cutoff.value_or(params.L);
      break;
    case ArcStyle::N:
      d.cutoff_ = std::pow(params.P, 0.75);
      break;
  }
  require(d.cutoff_ >= 1.0, "arc cutoff must be at least 1");
  const std::int64_t qmax = tolerant_floor(d.cutoff_);
  // Roughly 3/pi^2 qmax^2 arcs.
  if (0.31 * static_cast<double>(qmax) * static_cast<double>(qmax) > static_cast<double>(kMaxArcs))
    throw ResourceLimitError("arc family larger than " + std::to_string(kMaxArcs) + " arcs");

  for (std::int64_t q = 1; q <= qmax; ++q) {
    for (std::int64_t a = 0; a < q; ++a) {
      if (gcd_u64(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(q)) != 1) continue;
      Arc arc;
      arc.label = {a, q};
      arc.center = static_cast<double>(a) / static_cast<double>(q);
      arc.half_width = (style == ArcStyle::P)
                           ? d.cutoff_ / static_cast<double>(params.N)
                           : d.cutoff_ / (static_cast<double>(q) * P3);
      d.arcs_.push_back(arc);
    }
  }

  auto pieces = arc_pieces(d);
  std::sort(pieces.begin(), pieces.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  double reach = -1.0;
  for (const auto& p : pieces) {
    if (p.lo <= reach) {
      d.overlapping_ = true;
      break;
    }
    reach = std::max(reach, p.hi);
  }
  return d;
}

bool ArcDissection::contains(const Arc& arc, double alpha) const {
  return circle_distance(alpha, arc.center) <= arc.half_width;
}

std::vector<Interval> arc_pieces(const ArcDissection& d) {
  std::vector<Interval> out;
  for (const auto& arc : d.arcs()) {
    const double lo = arc.center - arc.half_width;
    const double hi = arc.center + arc.half_width;
    if (hi - lo >= 1.0) {
      out.push_back({0.0, 1.0});
    } else if (lo < 0.0) {
      out.push_back({0.0, hi});
      out.push_back({1.0 + lo, 1.0});
    } else if (hi > 1.0) {
      out.push_back({lo, 1.0});
      out.push_back({0.0, hi - 1.0});
    } else {
      out.push_back({lo, hi});
    }
  }
  return out;
}

std::optional<Rational> arc_membership(double alpha, const ArcDissection& d) {
  require(std::isfinite(alpha) && alpha >= 0.0 && alpha < 1.0, "alpha must lie in [0,1)");
  const std::int64_t qmax = tolerant_floor(d.cutoff());
  Rational r = (d.style() == ArcStyle::P) ? nearest_fraction(alpha, qmax) : best_rational(alpha, qmax);
  if (r.a == r.q) r = {0, 1};
  Arc arc;
  arc.label = r;
  arc.center = static_cast<double>(r.a) / static_cast<double>(r.q);
  const double P3 = d.params().P * d.params().P * d.params().P;
  arc.half_width = (d.style() == ArcStyle::P) ? d.cutoff() / static_cast<double>(d.params().N)
                                               : d.cutoff() / (static_cast<double>(r.q) * P3);
  if (d.contains(arc, alpha)) return r;
  return std::nullopt;
}

double dissection_measure(const ArcDissection& d) {
  require(!d.overlapping(), "measure requested for an overlapping dissection");
  CompensatedSum total;
  for (const auto& arc : d.arcs()) total.add(std::min(2.0 * arc.half_width, 1.0));
  return total.value();
}

ArcIntegrand ArcIntegrand::single(std::vector<IntegrandFactor> factors, std::int64_t twist) {
  ArcIntegrand it;
  it.terms.push_back({1.0, std::move(factors)});
  it.twist = twist;
  return it;
}

ArcIntegrand ArcIntegrand::constant_one() {
  return single({IntegrandFactor{KernelId::unit, 1, false}});
}

namespace {

struct Source {
  enum class Type { weyl, unit, f_star, F_star } type = Type::unit;
  std::vector<std::uint64_t> bases;
  std::optional<CubeList> cubes;
};

struct CompiledFactor {
  std::size_t source;
  unsigned exponent;
  bool conjugated;
};

struct CompiledTerm {
  double coefficient;
  std::vector<CompiledFactor> factors;
};

struct Compiled {
  std::vector<Source> sources;
  std::vector<CompiledTerm> terms;
  std::int64_t twist = 0;
  bool uses_arc_kernels = false;
};

Compiled compile(const ArcIntegrand& integrand) {
  require(!integrand.terms.empty(), "integrand has no terms");
  Compiled c;
  c.twist = integrand.twist;
  for (const auto& term : integrand.terms) {
    require(!term.factors.empty(), "integrand term has no factors");
    CompiledTerm ct{term.coefficient, {}};
    for (const auto& f : term.factors) {
      require(f.exponent >= 1, "factor exponents must be positive");
      Source src;
      if (const auto* spec = std::get_if<WeylSumSpec>(&f.source)) {
        src.type = Source::Type::weyl;
        src.bases = spec->bases();
      } else {
        switch (std::get<KernelId>(f.source)) {
          case KernelId::unit:
            src.type = Source::Type::unit;
            break;
          case KernelId::f_star:
            src.type = Source::Type::f_star;
            c.uses_arc_kernels = true;
            break;
          case KernelId::F_star:
            src.type = Source::Type::F_star;
            c.uses_arc_kernels = true;
            break;
        }
      }
      std::size_t slot = c.sources.size();
      for (std::size_t i = 0; i < c.sources.size(); ++i)
        if (c.sources[i].type == src.type && c.sources[i].bases == src.bases) slot = i;
      if (slot == c.sources.size()) {
        if (src.type == Source::Type::weyl) src.cubes.emplace(src.bases);
        c.sources.push_back(std::move(src));
      }
      ct.factors.push_back({slot, f.exponent, f.conjugated});
    }
    c.terms.push_back(std::move(ct));
  }
  return c;
}

std::complex<double> ipow(std::complex<double> z, unsigned e) {
  std::complex<double> r = 1.0;
  while (e-- > 0) r *= z;
  return r;
}

std::complex<double> combine(const Compiled& c, const std::vector<std::complex<double>>& values,
                             double twist_phase) {
  std::complex<double> total = 0.0;
  for (const auto& term : c.terms) {
    std::complex<double> prod = term.coefficient;
    for (const auto& f : term.factors) {
      const auto v = f.conjugated ? std::conj(values[f.source]) : values[f.source];
      prod *= ipow(v, f.exponent);
    }
    total += prod;
  }
  const double x = 2.0 * std::numbers::pi * (twist_phase - std::nearbyint(twist_phase));
  return total * std::complex<double>(std::cos(x), std::sin(x));
}

}  // namespace

std::uint64_t integrand_degree(const ArcIntegrand& integrand) {
  std::uint64_t best = 0;
  for (const auto& term : integrand.terms) {
    std::uint64_t deg = 0;
    for (const auto& f : term.factors) {
      if (const auto* spec = std::get_if<WeylSumSpec>(&f.source)) {
        std::uint64_t mx = 0;
        for (auto x : spec->bases()) mx = std::max(mx, x * x * x);
        deg += f.exponent * mx;
      }
    }
    best = std::max(best, deg);
  }
  const std::uint64_t tw = static_cast<std::uint64_t>(integrand.twist < 0 ? -integrand.twist : integrand.twist);
  return best + tw;
}

ArcIntegrationResult integrate_over_arcs(const ArcIntegrand& integrand, const ArcDissection& d,
                                         double tol) {
  require(tol > 0.0, "tolerance must be positive");
  const Compiled c = compile(integrand);
  const auto& arcs = d.arcs();
  const double P = d.params().P;
  const double P3 = P * P * P;
  const double degree = static_cast<double>(integrand_degree(integrand));
  const double per_arc_tol = tol / static_cast<double>(arcs.size());

  std::vector<detail::QuadratureOutcome> results(arcs.size());
  parallel_for(arcs.size(), [&](std::size_t idx) {
    const Arc& arc = arcs[idx];
    const std::int64_t a = arc.label.a;
    const auto q = static_cast<std::uint64_t>(arc.label.q);
    const double hw = std::min(arc.half_width, 0.5);
    std::complex<double> sq = 0.0;
    if (c.uses_arc_kernels) sq = cubic_gauss_sum(q, a) / static_cast<double>(q);
    // e(-twist a / q) handled on integers, e(-twist beta) on doubles.
    const std::int64_t tw_res = static_cast<std::int64_t>(
        detail::reduce_signed(-static_cast<std::int64_t>(detail::reduce_signed(c.twist, q)) * a, q));
    const double tw_base = static_cast<double>(tw_res) / static_cast<double>(q);

    std::vector<std::complex<double>> values(c.sources.size());
    auto f = [&](double beta) {
      for (std::size_t s = 0; s < c.sources.size(); ++s) {
        const Source& src = c.sources[s];
        switch (src.type) {
          case Source::Type::weyl:
            values[s] = src.cubes->evaluate_rational(a, q, beta);
            break;
          case Source::Type::unit:
            values[s] = 1.0;
            break;
          case Source::Type::f_star:
            values[s] = sq * P * v_unit(beta * P3);
            break;
          case Source::Type::F_star:
            values[s] = sq * (2.0 * P) * w_unit(8.0 * beta * P3);
            break;
        }
      }
      // twist * beta reduced mod 1 without rounding the integer part.
      const double tw = c.twist == 0 ? 0.0 : ExactPhase(beta)(static_cast<std::uint64_t>(std::llabs(c.twist)));
      return combine(c, values, tw_base + (c.twist > 0 ? -tw : tw));
    };

    const double width = 2.0 * hw;
    const auto n0 = static_cast<std::size_t>(std::clamp(std::ceil(2.0 * width * std::max(degree, 1.0)), 1.0, 1e6));
    try {
      results[idx] = detail::adaptive_gk15(f, detail::uniform_breakpoints(-hw, hw, n0), per_arc_tol,
                                           kQuadraturePanelBudget, "arc");
    } catch (const ConvergenceError&) {
      throw ConvergenceError("arc quadrature failed on arc a=" + std::to_string(a) +
                             " q=" + std::to_string(q));
    }
  });

  ArcIntegrationResult out;
  CompensatedComplexSum acc;
  CompensatedSum err;
  for (const auto& r : results) {
    acc.add(r.value);
    err.add(r.abs_error);
    out.evaluations += r.evaluations;
  }
  out.value = acc.value();
  out.abs_error_estimate = err.value();
  return out;
}

std::complex<double> mean_value_grid(const ArcIntegrand& integrand, std::uint64_t grid_points) {
  const Compiled c = compile(integrand);
  for (const auto& s : c.sources)
    require(s.type == Source::Type::weyl || s.type == Source::Type::unit,
            "mean_value_grid supports Weyl sums and the unit kernel only");
  require(grid_points >= 1, "grid must have at least one point");
  if (grid_points > kMaxGridPoints) throw ResourceLimitError("grid larger than the grid budget");
  const std::uint64_t degree = integrand_degree(integrand);
  require(grid_points > degree, "grid of " + std::to_string(grid_points) +
                                    " points undersamples an integrand of degree " + std::to_string(degree));
  const std::uint64_t M = grid_points;
  const double inv_M = 1.0 / static_cast<double>(M);
  const auto& kern = simd::active();

  struct Track {
    std::vector<std::uint32_t> residue;
    std::vector<std::uint32_t> step;
  };
  std::vector<Track> tracks(c.sources.size());
  for (std::size_t s = 0; s < c.sources.size(); ++s) {
    if (c.sources[s].type != Source::Type::weyl) continue;
    for (auto cube : c.sources[s].cubes->cubes()) {
      tracks[s].residue.push_back(0);
      tracks[s].step.push_back(static_cast<std::uint32_t>(cube % M));
    }
  }
  const std::uint64_t twist_step = detail::reduce_signed(-c.twist, M);

  std::vector<double> phases;
  std::vector<std::complex<double>> values(c.sources.size(), 1.0);
  CompensatedComplexSum acc;
  std::uint64_t twist_res = 0;
  for (std::uint64_t j = 0; j < M; ++j) {
    for (std::size_t s = 0; s < c.sources.size(); ++s) {
      if (c.sources[s].type != Source::Type::weyl) continue;
      auto& t = tracks[s];
      phases.resize(t.residue.size());
      for (std::size_t i = 0; i < t.residue.size(); ++i) phases[i] = static_cast<double>(t.residue[i]) * inv_M;
      values[s] = kern.unit_phase_sum(phases);
      kern.advance_residues(t.residue, t.step, static_cast<std::uint32_t>(M));
    }
    acc.add(combine(c, values, static_cast<double>(twist_res) * inv_M));
    twist_res += twist_step;
    if (twist_res >= M) twist_res -= M;
  }
  return acc.value() * inv_M;
}

std::complex<double> major_arc_approximant(double alpha, const ArcDissection& d, ApproximantKind kind) {
  const auto label = arc_membership(alpha, d);
  if (!label) return 0.0;
  const auto q = static_cast<std::uint64_t>(label->q);
  double beta = alpha - static_cast<double>(label->a) / static_cast<double>(label->q);
  beta -= std::nearbyint(beta);
  const double P = d.params().P;
  const double P3 = P * P * P;
  const std::complex<double> sq = cubic_gauss_sum(q, label->a) / static_cast<double>(q);
  if (kind == ApproximantKind::f_star) return sq * P * v_unit(beta * P3);
  return sq * (2.0 * P) * w_unit(8.0 * beta * P3);
}

}  // namespace minicubes
