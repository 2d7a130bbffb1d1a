#include "minicubes/exp_sums.hpp"

#include <fftw3.h>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>

#include "minicubes/accumulate.hpp"
#include "minicubes/errors.hpp"
#include "minicubes/params.hpp"
#include "minicubes/simd.hpp"
#include "roots.hpp"

namespace minicubes {

using detail::mulmod;
using detail::reduce_signed;
using detail::RootTable;

namespace {

constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 31;

struct CubeClasses {
  std::vector<std::uint32_t> residue;
  std::vector<double> count;
};

// Distinct cube residues mod q with multiplicities.
CubeClasses cube_classes(std::uint64_t q) {
  const auto counts = cube_residue_counts(q);
  CubeClasses out;
  for (std::uint64_t c = 0; c < q; ++c) {
    if (counts[c] == 0) continue;
    out.residue.push_back(static_cast<std::uint32_t>(c));
    out.count.push_back(counts[c]);
  }
  return out;
}

// S(q, a) for a = 0..q-1, stepping the class indices a*c mod q by c each time.
std::vector<std::complex<double>> all_gauss_sums(std::uint64_t q, const RootTable& roots) {
  const auto& k = simd::active();
  const CubeClasses cls = cube_classes(q);
  const std::vector<double> zeros(cls.count.size(), 0.0);
  std::vector<std::uint32_t> index(cls.residue.size(), 0);
  std::vector<std::complex<double>> out(q);
  for (std::uint64_t a = 0; a < q; ++a) {
    out[a] = k.gather_rotate_sum(cls.count, zeros, index, roots.re.data(), roots.im.data());
    k.advance_residues(index, cls.residue, static_cast<std::uint32_t>(q));
  }
  return out;
}

std::vector<std::uint64_t> factor(std::uint64_t n) {
  std::vector<std::uint64_t> primes;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    primes.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) primes.push_back(n);
  return primes;
}

unsigned valuation(std::uint64_t n, std::uint64_t p) {
  unsigned v = 0;
  while (n != 0 && n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// Cyclic self-convolution of integer counts, rounded back to integers.
std::vector<std::uint64_t> cyclic_square(const std::vector<std::uint32_t>& f) {
  const std::size_t m = f.size();
  std::vector<std::uint64_t> g(m, 0);
  std::vector<std::size_t> support;
  for (std::size_t i = 0; i < m; ++i)
    if (f[i] != 0) support.push_back(i);
  if (support.size() * support.size() <= 64 * m || m <= 4096) {
    for (std::size_t i : support)
      for (std::size_t j : support) g[(i + j) % m] += std::uint64_t{f[i]} * f[j];
    return g;
  }

  static std::mutex planner_mutex;
  const std::size_t half = m / 2 + 1;
  auto* in = fftw_alloc_real(m);
  auto* spec = fftw_alloc_complex(half);
  fftw_plan fwd, inv;
  {
    std::lock_guard<std::mutex> lock(planner_mutex);
    fwd = fftw_plan_dft_r2c_1d(static_cast<int>(m), in, spec, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_1d(static_cast<int>(m), spec, in, FFTW_ESTIMATE);
  }
  for (std::size_t i = 0; i < m; ++i) in[i] = f[i];
  fftw_execute(fwd);
  for (std::size_t i = 0; i < half; ++i) {
    const double re = spec[i][0];
    const double im = spec[i][1];
    spec[i][0] = re * re - im * im;
    spec[i][1] = 2.0 * re * im;
  }
  fftw_execute(inv);
  for (std::size_t i = 0; i < m; ++i) {
    const double v = in[i] / static_cast<double>(m);
    g[i] = static_cast<std::uint64_t>(std::llround(v));
  }
  {
    std::lock_guard<std::mutex> lock(planner_mutex);
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
  }
  fftw_free(in);
  fftw_free(spec);

  unsigned __int128 total = 0;
  for (auto v : g) total += v;
  if (total != static_cast<unsigned __int128>(m) * m)
    throw ConvergenceError("cube-pair convolution lost exactness at modulus " + std::to_string(m));
  return g;
}

}  // namespace

std::vector<std::uint32_t> cube_residue_counts(std::uint64_t q) {
  require(q >= 1, "modulus must be positive");
  require(q < kMaxModulus, "modulus too large");
  std::vector<std::uint32_t> counts(q, 0);
  for (std::uint64_t r = 0; r < q; ++r) ++counts[mulmod(mulmod(r, r, q), r, q)];
  return counts;
}

std::complex<double> cubic_gauss_sum(std::uint64_t q, std::int64_t a) {
  require(q >= 1, "q must be positive");
  const CubeClasses cls = cube_classes(q);
  const std::uint64_t ar = reduce_signed(a, q);
  const RootTable roots(q);
  std::vector<std::uint32_t> index(cls.residue.size());
  for (std::size_t i = 0; i < index.size(); ++i)
    index[i] = static_cast<std::uint32_t>(mulmod(ar, cls.residue[i], q));
  const std::vector<double> zeros(cls.count.size(), 0.0);
  return simd::active().gather_rotate_sum(cls.count, zeros, index, roots.re.data(),
                                          roots.im.data());
}

CongruenceCounter local_count_rho(std::uint64_t q, std::uint64_t cap) {
  require(q >= 1, "q must be positive");
  if (q > cap) throw ResourceLimitError("rho(q) requested above cap " + std::to_string(cap));
  const auto f = cube_residue_counts(q);
  // h(c) = #{(y1, y2) : y1^3 - y2^3 = c mod q}
  std::vector<std::uint64_t> h(q, 0);
  for (std::uint64_t u = 0; u < q; ++u)
    for (std::uint64_t v = 0; v < q; ++v) h[(u + q - v) % q] += std::uint64_t{f[u]} * f[v];
  unsigned __int128 total = 0;
  for (std::uint64_t c1 = 0; c1 < q; ++c1)
    for (std::uint64_t c2 = 0; c2 < q; ++c2)
      total += static_cast<unsigned __int128>(h[c1] * h[c2]) * h[(2 * q - c1 - c2) % q];
  return {q, static_cast<std::uint64_t>(total)};
}

long double gauss_sum_sixth_moment(std::uint64_t q, std::uint64_t cap) {
  require(q >= 1, "q must be positive");
  if (q > cap) throw ResourceLimitError("sixth moment requested above cap " + std::to_string(cap));
  using Big = boost::multiprecision::cpp_bin_float_50;
  const Big two_pi = 2 * boost::math::constants::pi<Big>();
  std::vector<Big> c(q), s(q);
  for (std::uint64_t j = 0; j < q; ++j) {
    const Big t = two_pi * j / q;
    c[j] = cos(t);
    s[j] = sin(t);
  }
  std::vector<std::uint64_t> cubes(q);
  for (std::uint64_t r = 0; r < q; ++r) cubes[r] = mulmod(mulmod(r, r, q), r, q);
  Big total = 0;
  for (std::uint64_t a = 1; a <= q; ++a) {
    Big re = 0, im = 0;
    for (std::uint64_t r = 0; r < q; ++r) {
      const std::uint64_t k = mulmod(a % q, cubes[r], q);
      re += c[k];
      im += s[k];
    }
    const Big m2 = re * re + im * im;
    total += m2 * m2 * m2;
  }
  return total.convert_to<long double>();
}

double weight_w(std::uint64_t q) {
  require(q >= 1, "q must be positive");
  double w = 1.0;
  for (std::uint64_t p : factor(q)) {
    const unsigned e = valuation(q, p);
    const unsigned u = (e - 1) / 3;
    const unsigned v = e - 3 * u;
    const double pd = static_cast<double>(p);
    w *= (v == 1) ? 3.0 * std::pow(pd, -static_cast<double>(u) - 0.5)
                  : std::pow(pd, -static_cast<double>(u) - 1.0);
  }
  return w;
}

SeriesCoefficient series_coefficient_A(std::uint64_t q, std::uint64_t n) {
  require(q >= 1 && n >= 1, "q and n must be positive");
  const RootTable roots(q);
  const auto sums = all_gauss_sums(q, roots);
  const double inv_q = 1.0 / static_cast<double>(q);
  CompensatedComplexSum acc;
  CompensatedSum magnitude;
  const std::uint64_t nr = n % q;
  for (std::uint64_t a = (q == 1 ? 0 : 1); a < std::max<std::uint64_t>(q, 1); ++a) {
    if (q > 1 && gcd_u64(a, q) != 1) continue;
    const std::complex<double> z = sums[a] * inv_q;
    const std::complex<double> z2 = z * z;
    const std::complex<double> z4 = z2 * z2;
    const std::uint64_t idx = (q - mulmod(a, nr, q)) % q;
    acc.add(z4 * std::complex<double>(roots.re[idx], roots.im[idx]));
    magnitude.add(std::abs(z4));
  }
  const std::complex<double> total = acc.value();
  SeriesCoefficient out;
  out.value = total.real();
  const double mag = magnitude.value();
  // When every Gauss sum vanishes (q = 3, 11, ...) the magnitudes are pure
  // rounding noise, so the residue is measured against at least epsilon.
  out.imag_residue = std::fabs(total.imag()) / std::max(mag, std::numeric_limits<double>::epsilon());
  out.imag_flagged = out.imag_residue > kImagTolerance;
  return out;
}

SingularSeriesTable::SingularSeriesTable(std::uint64_t Q_max) : Q_max_(Q_max) {
  require(Q_max >= 1, "Q_max must be positive");
  if (Q_max > 100000) throw ResourceLimitError("singular series table above Q_max = 1e5");
  const auto& kern = simd::active();

  std::vector<std::int64_t> pp_index(Q_max + 1, -1);
  for (std::uint64_t p : primes_up_to(Q_max)) {
    for (std::uint64_t m = p; m <= Q_max; m *= p) {
      const RootTable roots(m);
      const auto sums = all_gauss_sums(m, roots);
      // Coefficients (S(m,a)/m)^4 over units a, and per-a steps -a mod m.
      std::vector<double> c_re, c_im;
      std::vector<std::uint32_t> steps;
      const double inv_m = 1.0 / static_cast<double>(m);
      double mag = 0.0;
      for (std::uint64_t a = 1; a < m; ++a) {
        if (a % p == 0) continue;
        const std::complex<double> z = sums[a] * inv_m;
        const std::complex<double> z4 = (z * z) * (z * z);
        c_re.push_back(z4.real());
        c_im.push_back(z4.imag());
        steps.push_back(static_cast<std::uint32_t>(m - a));
        mag += std::abs(z4);
      }
      PrimePower pp{m, std::vector<double>(m)};
      std::vector<std::uint32_t> index(steps.size(), 0);
      for (std::uint64_t r = 0; r < m; ++r) {
        const auto v = kern.gather_rotate_sum(c_re, c_im, index, roots.re.data(), roots.im.data());
        if (std::fabs(v.imag()) > kImagTolerance * std::max(mag, std::numeric_limits<double>::epsilon()))
          imag_flagged_ = true;
        pp.A[r] = v.real();
        kern.advance_residues(index, steps, static_cast<std::uint32_t>(m));
      }
      pp_index[m] = static_cast<std::int64_t>(prime_powers_.size());
      prime_powers_.push_back(std::move(pp));
      if (m > Q_max / p) break;
    }
  }

  factor_index_.resize(Q_max + 1);
  for (std::uint64_t q = 2; q <= Q_max; ++q) {
    std::uint64_t rest = q;
    for (std::uint64_t p : factor(q)) {
      std::uint64_t m = 1;
      while (rest % p == 0) {
        rest /= p;
        m *= p;
      }
      factor_index_[q].push_back(static_cast<std::uint32_t>(pp_index[m]));
    }
  }
}

void SingularSeriesTable::fill_prime_power_values(std::uint64_t n, std::vector<double>& out) const {
  out.resize(prime_powers_.size());
  for (std::size_t i = 0; i < prime_powers_.size(); ++i)
    out[i] = prime_powers_[i].A[n % prime_powers_[i].modulus];
}

double SingularSeriesTable::coefficient(std::uint64_t q, std::uint64_t n) const {
  require(q >= 1 && q <= Q_max_, "q outside table range");
  double v = 1.0;
  for (auto i : factor_index_[q]) v *= prime_powers_[i].A[n % prime_powers_[i].modulus];
  return v;
}

double SingularSeriesTable::value(std::uint64_t n) const {
  thread_local std::vector<double> local;
  fill_prime_power_values(n, local);
  CompensatedSum acc;
  acc.add(1.0);
  for (std::uint64_t q = 2; q <= Q_max_; ++q) {
    double v = 1.0;
    for (auto i : factor_index_[q]) v *= local[i];
    acc.add(v);
  }
  return acc.value();
}

SeriesReport SingularSeriesTable::report(std::uint64_t n) const {
  std::vector<double> local;
  fill_prime_power_values(n, local);
  SeriesReport rep;
  rep.n = n;
  rep.Q_max = Q_max_;
  rep.imag_flagged = imag_flagged_;
  rep.partial_sums.reserve(Q_max_);
  CompensatedSum acc;
  for (std::uint64_t q = 1; q <= Q_max_; ++q) {
    double v = 1.0;
    for (auto i : factor_index_[q]) v *= local[i];
    acc.add(v);
    rep.partial_sums.push_back({q, v, acc.value()});
  }
  rep.value = acc.value();
  for (const auto& t : rep.partial_sums)
    if (2 * t.q > Q_max_) rep.tail_estimate = std::max(rep.tail_estimate, std::fabs(t.running - rep.value));
  return rep;
}

namespace {

std::shared_ptr<const SingularSeriesTable> shared_table(std::uint64_t Q_max) {
  static std::mutex mu;
  static std::shared_ptr<const SingularSeriesTable> cached;
  std::lock_guard<std::mutex> lock(mu);
  if (!cached || cached->Q_max() != Q_max) cached = std::make_shared<SingularSeriesTable>(Q_max);
  return cached;
}

}  // namespace

SeriesReport singular_series_truncated(std::uint64_t n, std::uint64_t Q_max) {
  require(n >= 1, "n must be positive");
  return shared_table(Q_max)->report(n);
}

double local_count_density(std::uint64_t p, std::uint64_t n, unsigned k) {
  require(is_prime(p), "p must be prime");
  require(k >= 1, "k must be positive");
  const std::uint64_t m = ipow(p, k);
  if (m > kLocalDensityModulusCap)
    throw ResourceLimitError("local density modulus " + std::to_string(m) + " above cap");
  const auto g = cyclic_square(cube_residue_counts(m));
  const std::uint64_t nr = n % m;
  unsigned __int128 M = 0;
  for (std::uint64_t c = 0; c < m; ++c) M += static_cast<unsigned __int128>(g[c]) * g[(nr + m - c) % m];
  const long double scale = static_cast<long double>(m) * m * m;
  return static_cast<double>(static_cast<long double>(M) / scale);
}

LocalDensity local_density(std::uint64_t p, std::uint64_t n, unsigned k_max) {
  require(is_prime(p), "p must be prime");
  require(n >= 1, "n must be positive");
  require(k_max >= 1, "k_max must be positive");
  // Solutions with a unit coordinate lift from level 1 (level 2 for p = 3).
  // The rest are p times a solution for n / p^3 three levels down, which
  // adds one level for p = 3 whenever 3 | v_3(n).
  const unsigned v = valuation(n, p);
  const unsigned k_stable = v + 1 + (p == 3 && v % 3 == 0 ? 1u : 0u);
  auto fits = [&](unsigned k) {
    return k <= k_max && static_cast<long double>(std::pow(static_cast<long double>(p), k)) <=
                             static_cast<long double>(kLocalDensityModulusCap);
  };
  if (!fits(k_stable))
    throw ConvergenceError("local density at p=" + std::to_string(p) + " needs level " +
                           std::to_string(k_stable) + " beyond k_max or the modulus cap");
  return {local_count_density(p, n, k_stable), k_stable};
}

double euler_product(std::uint64_t n, std::uint64_t p_max) {
  double prod = 1.0;
  for (std::uint64_t p : primes_up_to(p_max)) {
    // For p = 2 (mod 3) the density is exactly 1 unless p divides n.
    if (p % 3 == 2 && n % p != 0) continue;
    prod *= local_density(p, n, 64).value;
  }
  return prod;
}

double gamma_constant() {
  static const double value = [] {
    const long double g43 = std::tgamma(4.0L / 3.0L);
    const long double g23 = std::tgamma(2.0L / 3.0L);
    return static_cast<double>(g43 * g43 / g23);
  }();
  return value;
}

double main_term(std::uint64_t n, double theta, std::uint64_t Q_max) {
  require(n >= 2, "main term needs n >= 2");
  const double series = singular_series_truncated(n, Q_max).value;
  return gamma_constant() * series * std::pow(static_cast<double>(n), 2.0 * theta - 1.0 / 3.0);
}

double main_term(std::uint64_t n, double theta, const SingularSeriesTable& table) {
  require(n >= 2, "main term needs n >= 2");
  return gamma_constant() * table.value(n) *
         std::pow(static_cast<double>(n), 2.0 * theta - 1.0 / 3.0);
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  if (limit < 2) return out;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

}  // namespace minicubes
