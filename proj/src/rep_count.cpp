#include "minicubes/rep_count.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <memory>
#include <string>

#include "minicubes/accumulate.hpp"
#include "minicubes/errors.hpp"
#include "minicubes/exp_sums.hpp"
#include "minicubes/parallel.hpp"
#include "minicubes/smooth_sets.hpp"
#include "minicubes/weyl.hpp"

namespace minicubes {

namespace {

using boost::multiprecision::cpp_int;

std::uint64_t cube(std::uint64_t x) { return x * x * x; }

struct Runs {
  std::vector<std::uint64_t> key;
  std::vector<std::uint64_t> mult;

  std::uint64_t lookup(std::uint64_t s) const {
    const auto it = std::lower_bound(key.begin(), key.end(), s);
    if (it == key.end() || *it != s) return 0;
    return mult[static_cast<std::size_t>(it - key.begin())];
  }
  std::uint64_t sum_of_squares() const {
    std::uint64_t total = 0;
    for (auto m : mult) total += m * m;
    return total;
  }
};

Runs make_runs(std::vector<std::uint64_t> values) {
  std::sort(values.begin(), values.end());
  Runs r;
  for (std::size_t i = 0; i < values.size();) {
    std::size_t j = i;
    while (j < values.size() && values[j] == values[i]) ++j;
    r.key.push_back(values[i]);
    r.mult.push_back(j - i);
    i = j;
  }
  return r;
}

constexpr std::uint64_t kMaxTuples = 60'000'000;

// All sums c_1 + ... + c_k with c_i drawn from the i-th list of cubes.
std::vector<std::uint64_t> tuple_sums(const std::vector<const std::vector<std::uint64_t>*>& lists) {
  double size = 1.0;
  for (const auto* l : lists) size *= static_cast<double>(l->size());
  if (size > static_cast<double>(kMaxTuples))
    throw ResourceLimitError("equal-sums count needs more than " + std::to_string(kMaxTuples) + " tuples");
  std::vector<std::uint64_t> acc{0};
  for (const auto* l : lists) {
    std::vector<std::uint64_t> next;
    next.reserve(acc.size() * l->size());
    for (auto a : acc)
      for (auto c : *l) next.push_back(a + c);
    acc.swap(next);
  }
  return acc;
}

std::vector<std::uint64_t> cubes_of(const std::vector<std::uint64_t>& bases) {
  std::vector<std::uint64_t> out;
  out.reserve(bases.size());
  for (auto b : bases) out.push_back(cube(b));
  return out;
}

// theta as a/b with b <= 1000 when it is that fraction to within 1e-12.
std::optional<Rational> rational_exponent(double theta) {
  const double frac = theta - std::floor(theta);
  const Rational r = best_rational(frac, 1000);
  const double approx = static_cast<double>(r.a) / static_cast<double>(r.q) + std::floor(theta);
  if (std::fabs(approx - theta) > 1e-12) return std::nullopt;
  return Rational{r.a + static_cast<std::int64_t>(std::floor(theta)) * r.q, r.q};
}

// y^b <= n^a exactly.
bool power_le(std::uint64_t y, std::uint64_t n, const Rational& e) {
  const cpp_int lhs = boost::multiprecision::pow(cpp_int(y), static_cast<unsigned>(e.q));
  const cpp_int rhs = boost::multiprecision::pow(cpp_int(n), static_cast<unsigned>(e.a));
  return lhs <= rhs;
}

void check_table_limit(std::uint64_t n) {
  if (n > kMaxTableLimit)
    throw ResourceLimitError("two-cube table above the documented limit n <= " +
                             std::to_string(kMaxTableLimit));
}

}  // namespace

TwoCubeTable::TwoCubeTable(std::uint64_t limit, std::uint64_t x_lo, std::uint64_t x_hi) : limit_(limit) {
  check_table_limit(limit);
  std::vector<std::uint64_t> all;
  if (x_hi >= x_lo) {
    const std::uint64_t span = x_hi - x_lo + 1;
    all.reserve(span * span);
    for (std::uint64_t a = x_lo; a <= x_hi; ++a) {
      const std::uint64_t ca = cube(a);
      if (ca > limit) break;
      for (std::uint64_t b = x_lo; b <= x_hi; ++b) {
        const std::uint64_t s = ca + cube(b);
        if (s > limit) break;
        all.push_back(s);
      }
    }
  }
  total_ = all.size();
  const Runs r = make_runs(std::move(all));
  sums_ = r.key;
  mult_.assign(r.mult.begin(), r.mult.end());
}

std::uint64_t TwoCubeTable::multiplicity(std::uint64_t s) const {
  const auto it = std::lower_bound(sums_.begin(), sums_.end(), s);
  if (it == sums_.end() || *it != s) return 0;
  return mult_[static_cast<std::size_t>(it - sums_.begin())];
}

std::pair<std::size_t, std::size_t> TwoCubeTable::range(std::uint64_t lo_exclusive,
                                                        std::uint64_t hi_inclusive) const {
  const auto first = std::upper_bound(sums_.begin(), sums_.end(), lo_exclusive);
  const auto last = std::upper_bound(sums_.begin(), sums_.end(), hi_inclusive);
  return {static_cast<std::size_t>(first - sums_.begin()),
          static_cast<std::size_t>(std::max(first, last) - sums_.begin())};
}

std::string count_variant_name(CountVariant v) {
  switch (v) {
    case CountVariant::r:
      return "r";
    case CountVariant::rho:
      return "rho";
    case CountVariant::sigma:
      return "sigma";
  }
  return "?";
}

std::uint64_t minicube_bound(std::uint64_t n, double theta) {
  require(theta > 0.0, "theta must be positive");
  if (n == 0) return 0;
  const auto exact = rational_exponent(theta);
  const long double t = exact ? static_cast<long double>(exact->a) / exact->q : theta;
  const long double v = std::pow(static_cast<long double>(n), t);
  auto y = static_cast<std::uint64_t>(std::floor(v));
  const long double nearest = std::nearbyint(v);
  if (exact && std::fabs(v - nearest) <= 1e-6L * std::max(1.0L, v)) {
    // Close to an integer: settle the boundary exactly.
    y = static_cast<std::uint64_t>(nearest);
    while (y > 0 && !power_le(y, n, *exact)) --y;
    while (power_le(y + 1, n, *exact)) ++y;
  }
  return y;
}

RepCountReport count_r(std::uint64_t n, double theta, const CountOptions& opts) {
  require(n >= 4 || (opts.allow_zero && n >= 1), "count_r needs n >= 4");
  require(theta > 0.0 && theta <= 1.0 / 3.0 + 1e-15, "theta must lie in (0, 1/3]");
  check_table_limit(n);
  const std::uint64_t start = opts.allow_zero ? 0 : 1;
  const TwoCubeTable table(n, start, integer_cube_root(n));
  const std::uint64_t ymax = minicube_bound(n, theta);
  std::uint64_t count = 0;
  for (std::uint64_t y1 = start; y1 <= ymax; ++y1) {
    const std::uint64_t c1 = cube(y1);
    if (c1 > n) break;
    for (std::uint64_t y2 = start; y2 <= ymax; ++y2) {
      const std::uint64_t c2 = cube(y2);
      if (c1 + c2 > n) break;
      count += table.multiplicity(n - c1 - c2);
    }
  }
  RepCountReport rep;
  rep.n = n;
  rep.theta = theta;
  rep.count = count;
  rep.variant = CountVariant::r;
  return rep;
}

RepCountReport count_rho(std::uint64_t n, const Parameters& params) {
  require(n > params.N && n <= 2 * params.N, "count_rho needs n in (N, 2N]");
  const auto xs = WeylSumSpec::interval(params.P, 2.0 * params.P).bases();
  const auto K = spec_K(params).bases();
  const auto h = smooth_set(std::max(params.R, 1.0), params.eta).members;
  const auto hc = cubes_of(h);
  const Runs ypairs = make_runs(tuple_sums({&hc, &hc}));
  std::uint64_t count = 0;
  for (auto x : xs) {
    const std::uint64_t cx = cube(x);
    if (cx >= n) break;
    for (auto k : K) {
      const std::uint64_t ck = cube(k);
      if (cx + ck >= n) continue;
      count += ypairs.lookup(n - cx - ck);
    }
  }
  RepCountReport rep;
  rep.n = n;
  rep.theta = params.theta;
  rep.count = count;
  rep.variant = CountVariant::rho;
  return rep;
}

RepCountReport count_sigma(std::uint64_t n, double theta, double P, double R) {
  require(P > 0.0, "P must be positive");
  RepCountReport rep;
  rep.n = n;
  rep.theta = theta;
  rep.variant = CountVariant::sigma;
  if (R < 1.0) return rep;
  check_table_limit(n);
  const auto x_all = static_cast<std::uint64_t>(std::max<std::int64_t>(tolerant_floor(2.0 * P), 0));
  const auto x_low = static_cast<std::uint64_t>(std::max<std::int64_t>(tolerant_floor(P), 0));
  const auto ymax = static_cast<std::uint64_t>(tolerant_floor(R));
  const TwoCubeTable all(n, 1, x_all);
  const TwoCubeTable low(n, 1, x_low);
  std::uint64_t count = 0;
  for (std::uint64_t y1 = 1; y1 <= ymax; ++y1) {
    for (std::uint64_t y2 = 1; y2 <= ymax; ++y2) {
      const std::uint64_t s = cube(y1) + cube(y2);
      if (s > n) break;
      count += all.multiplicity(n - s) - low.multiplicity(n - s);
    }
  }
  rep.count = count;
  return rep;
}

ScanResult batch_scan(std::uint64_t n_lo, std::uint64_t n_hi, double theta, std::uint64_t Q_max,
                      const ScanOptions& opts) {
  require(n_hi > n_lo, "scan window (n_lo, n_hi] is empty");
  require(n_lo >= 3, "scan window must start above 3");
  require(theta > 0.0 && theta <= 1.0 / 3.0 + 1e-15, "theta must lie in (0, 1/3]");
  check_table_limit(n_hi);
  const std::uint64_t width = n_hi - n_lo;
  if (width > 50'000'000) throw ResourceLimitError("scan window wider than 5e7");

  const TwoCubeTable table(n_hi - 2, 1, integer_cube_root(n_hi));
  const std::uint64_t ymax = minicube_bound(n_hi, theta);
  // First n admitting each y as a minicube.
  std::vector<std::uint64_t> first_n(ymax + 1, 0);
  for (std::uint64_t y = 1; y <= ymax; ++y) {
    std::uint64_t lo = 1, hi = n_hi;
    while (lo < hi) {
      const std::uint64_t mid = lo + (hi - lo) / 2;
      if (minicube_bound(mid, theta) >= y)
        hi = mid;
      else
        lo = mid + 1;
    }
    first_n[y] = lo;
  }

  std::vector<std::uint64_t> counts(width, 0);
  const auto& sums = table.sums();
  const auto& mult = table.multiplicities();
  for (std::uint64_t y1 = 1; y1 <= ymax; ++y1) {
    for (std::uint64_t y2 = 1; y2 <= ymax; ++y2) {
      const std::uint64_t s = cube(y1) + cube(y2);
      if (s >= n_hi) continue;
      const std::uint64_t valid_from = first_n[std::max(y1, y2)];
      const std::uint64_t lo_excl = std::max(n_lo, valid_from - 1);
      if (lo_excl >= n_hi) continue;
      const std::uint64_t x_lo = lo_excl > s ? lo_excl - s : 0;
      const auto [first, last] = table.range(x_lo, n_hi - s);
      for (std::size_t i = first; i < last; ++i) counts[sums[i] + s - n_lo - 1] += mult[i];
    }
  }

  ScanResult out;
  out.rows.resize(width);
  std::unique_ptr<SingularSeriesTable> series;
  if (opts.with_prediction) series = std::make_unique<SingularSeriesTable>(Q_max);
  const double gconst = gamma_constant();
  parallel_for(width, [&](std::size_t i) {
    RepCountReport& r = out.rows[i];
    r.n = n_lo + 1 + i;
    r.theta = theta;
    r.count = counts[i];
    r.variant = CountVariant::r;
    if (series) {
      const double s = series->value(r.n);
      const double pred = gconst * s * std::pow(static_cast<double>(r.n), 2.0 * theta - 1.0 / 3.0);
      r.series = s;
      r.predicted = pred;
      if (pred > 0.0) r.ratio = static_cast<double>(r.count) / pred;
    }
  });

  ScanSummary& sm = out.summary;
  sm.n_lo = n_lo;
  sm.n_hi = n_hi;
  sm.theta = theta;
  sm.Q_max = opts.with_prediction ? Q_max : 0;
  sm.size = width;
  CompensatedSum ratio_sum, count_sum;
  std::vector<double> ratios;
  for (const auto& r : out.rows) {
    if (r.exceptional()) ++sm.exceptional;
    count_sum.add(static_cast<double>(r.count));
    if (r.ratio) {
      ratios.push_back(*r.ratio);
      ratio_sum.add(*r.ratio);
    }
  }
  sm.exceptional_fraction = static_cast<double>(sm.exceptional) / static_cast<double>(width);
  sm.mean_count = count_sum.value() / static_cast<double>(width);
  sm.ratio_defined = ratios.size();
  if (!ratios.empty()) {
    sm.mean_ratio = ratio_sum.value() / static_cast<double>(ratios.size());
    std::sort(ratios.begin(), ratios.end());
    const std::size_t m = ratios.size();
    sm.median_ratio = (m % 2 == 1) ? ratios[m / 2] : 0.5 * (ratios[m / 2 - 1] + ratios[m / 2]);
  }
  return out;
}

std::uint64_t hua_count(std::uint64_t R, unsigned k) {
  require(R >= 1, "R must be positive");
  require(k == 1 || k == 2, "hua_count supports k in {1, 2}");
  if (k == 1) return R;
  if (R > 3000) throw ResourceLimitError("hua_count with k=2 limited to R <= 3000");
  const TwoCubeTable t(2 * cube(R), 1, R);
  std::uint64_t total = 0;
  for (auto m : t.multiplicities()) total += std::uint64_t{m} * m;
  return total;
}

MeanShape parse_mean_shape(const std::string& s) {
  if (s == "f2h6") return MeanShape::f2h6;
  if (s == "K2h6") return MeanShape::K2h6;
  if (s == "K8") return MeanShape::K8;
  if (s == "f2K2h4") return MeanShape::f2K2h4;
  throw PreconditionError("unknown mean-value shape '" + s + "'");
}

std::string mean_shape_name(MeanShape s) {
  switch (s) {
    case MeanShape::f2h6:
      return "f2h6";
    case MeanShape::K2h6:
      return "K2h6";
    case MeanShape::K8:
      return "K8";
    case MeanShape::f2K2h4:
      return "f2K2h4";
  }
  return "?";
}

Parameters toy_parameters(double P, double R, double eta, const ParameterOverrides& overrides) {
  require(P >= 1.0 && R >= 1.0, "mixed mean counts need P, R >= 1");
  require(eta > 0.0 && eta < 1.0, "eta must lie in (0,1)");
  Parameters p;
  p.P = P;
  p.R = R;
  p.eta = eta;
  p.N = static_cast<std::uint64_t>(std::llround(4.0 * P * P * P));
  p.Y = overrides.Y.value_or(std::pow(P, 11.0 / 79.0));
  p.J = overrides.J.value_or(static_cast<std::uint64_t>(std::floor(0.5 * kDefaultTau * std::log(P))));
  return p;
}

MixedSets mixed_sets(double P, double R, double eta, const ParameterOverrides& overrides) {
  const Parameters p = toy_parameters(P, R, eta, overrides);
  MixedSets s;
  s.f = spec_f(p).bases();
  s.h = smooth_set(R, eta).members;
  s.K = spec_K(p).bases();
  return s;
}

std::uint64_t mixed_mean_count(double P, double R, double eta, MeanShape shape,
                               const ParameterOverrides& overrides) {
  const MixedSets s = mixed_sets(P, R, eta, overrides);
  const auto f = cubes_of(s.f);
  const auto h = cubes_of(s.h);
  const auto K = cubes_of(s.K);
  std::vector<const std::vector<std::uint64_t>*> side;
  switch (shape) {
    case MeanShape::f2h6:
      side = {&f, &h, &h, &h};
      break;
    case MeanShape::K2h6:
      side = {&K, &h, &h, &h};
      break;
    case MeanShape::K8:
      side = {&K, &K, &K, &K};
      break;
    case MeanShape::f2K2h4:
      side = {&f, &K, &h, &h};
      break;
  }
  return make_runs(tuple_sums(side)).sum_of_squares();
}

}  // namespace minicubes
