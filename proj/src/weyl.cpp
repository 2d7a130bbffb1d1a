#include "minicubes/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "minicubes/accumulate.hpp"
#include "minicubes/errors.hpp"
#include "minicubes/simd.hpp"
#include "roots.hpp"

namespace minicubes {

WeylSumSpec WeylSumSpec::interval(double lo, double hi) {
  require(std::isfinite(lo) && std::isfinite(hi) && lo >= 0.0 && lo <= hi,
          "interval spec needs 0 <= lo <= hi");
  WeylSumSpec s;
  s.kind_ = Kind::interval;
  s.lo_ = lo;
  s.hi_ = hi;
  const std::int64_t a = tolerant_floor(lo);
  const std::int64_t b = tolerant_floor(hi);
  if (b > a && static_cast<std::uint64_t>(b - a) > kMaxWeylTerms)
    throw ResourceLimitError("Weyl sum index set exceeds term budget");
  return s;
}

WeylSumSpec WeylSumSpec::set(std::vector<std::uint64_t> members) {
  for (std::size_t i = 0; i < members.size(); ++i) {
    require(members[i] >= 1, "set spec members must be positive");
    require(i == 0 || members[i] > members[i - 1], "set spec must be strictly increasing");
  }
  if (members.size() > kMaxWeylTerms) throw ResourceLimitError("Weyl sum index set exceeds term budget");
  WeylSumSpec s;
  s.kind_ = Kind::set;
  s.members_ = std::move(members);
  return s;
}

WeylSumSpec WeylSumSpec::bilinear(std::vector<std::uint64_t> primes,
                                  std::vector<std::vector<std::uint64_t>> cofactors) {
  require(primes.size() == cofactors.size(), "bilinear spec needs one cofactor set per prime");
  std::uint64_t total = 0;
  for (const auto& c : cofactors) total += c.size();
  if (total > kMaxWeylTerms) throw ResourceLimitError("Weyl sum index set exceeds term budget");
  WeylSumSpec s;
  s.kind_ = Kind::bilinear;
  s.primes_ = std::move(primes);
  s.cofactors_ = std::move(cofactors);
  return s;
}

std::uint64_t WeylSumSpec::term_count() const {
  switch (kind_) {
    case Kind::interval: {
      const std::int64_t a = tolerant_floor(lo_);
      const std::int64_t b = tolerant_floor(hi_);
      return b > a ? static_cast<std::uint64_t>(b - a) : 0;
    }
    case Kind::set:
      return members_.size();
    case Kind::bilinear: {
      std::uint64_t total = 0;
      for (const auto& c : cofactors_) total += c.size();
      return total;
    }
  }
  return 0;
}

std::vector<std::uint64_t> WeylSumSpec::bases() const {
  std::vector<std::uint64_t> out;
  out.reserve(term_count());
  switch (kind_) {
    case Kind::interval: {
      const std::int64_t a = tolerant_floor(lo_);
      const std::int64_t b = tolerant_floor(hi_);
      for (std::int64_t x = a + 1; x <= b; ++x)
        if (x >= 1) out.push_back(static_cast<std::uint64_t>(x));
      break;
    }
    case Kind::set:
      out = members_;
      break;
    case Kind::bilinear:
      for (std::size_t i = 0; i < primes_.size(); ++i)
        for (std::uint64_t w : cofactors_[i]) out.push_back(primes_[i] * w);
      break;
  }
  return out;
}

std::string WeylSumSpec::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::interval:
      os << "interval(" << lo_ << "," << hi_ << "]";
      break;
    case Kind::set:
      os << "set[" << members_.size() << "]";
      break;
    case Kind::bilinear:
      os << "bilinear[" << primes_.size() << " primes, " << term_count() << " terms]";
      break;
  }
  return os.str();
}

WeylSumSpec spec_f(const Parameters& p) { return WeylSumSpec::interval(p.P, 2.0 * p.P); }

WeylSumSpec spec_h(const Parameters& p) {
  return WeylSumSpec::set(smooth_set(std::max(p.R, 1.0), p.eta).members);
}

WeylSumSpec spec_K(const Parameters& p) {
  const auto range = restricted_primes(p.Y, p.J);
  std::vector<std::vector<std::uint64_t>> cof;
  for (std::uint64_t prime : range.primes)
    cof.push_back(smooth_interval_set(p.P / static_cast<double>(prime), 2.0 * p.P / p.Y, p.eta).members);
  return WeylSumSpec::bilinear(range.primes, std::move(cof));
}

WeylSumSpec spec_F(const Parameters& p) { return WeylSumSpec::interval(0.0, 2.0 * p.P); }
WeylSumSpec spec_F0(const Parameters& p) { return WeylSumSpec::interval(0.0, p.P); }
WeylSumSpec spec_G(const Parameters& p) { return WeylSumSpec::interval(0.0, p.R); }

WeylSumSpec spec_by_name(const std::string& name, const Parameters& p) {
  if (name == "f") return spec_f(p);
  if (name == "h") return spec_h(p);
  if (name == "K") return spec_K(p);
  if (name == "F") return spec_F(p);
  if (name == "F0") return spec_F0(p);
  if (name == "G") return spec_G(p);
  throw PreconditionError("unknown generating function '" + name + "' (expected f,h,K,F,F0,G)");
}

ExactPhase::ExactPhase(double alpha) : alpha_(alpha) {
  require(std::isfinite(alpha), "phase multiplier must be finite");
  if (alpha == 0.0) {
    mode_ = Mode::zero;
    return;
  }
  negative_ = alpha < 0.0;
  int e = 0;
  const double mant = std::frexp(std::fabs(alpha), &e);
  mantissa_ = static_cast<std::uint64_t>(std::ldexp(mant, 53));
  shift_ = 53 - e;
  if (shift_ <= 0) {
    mode_ = Mode::integer;
  } else if (shift_ >= 117) {
    // mantissa * c < 2^117 <= 2^shift, so the product is already below 1.
    mode_ = Mode::small;
  } else {
    mode_ = Mode::exact;
  }
}

double ExactPhase::operator()(std::uint64_t c) const {
  switch (mode_) {
    case Mode::zero:
    case Mode::integer:
      return 0.0;
    case Mode::small:
      return alpha_ * static_cast<double>(c);
    case Mode::exact: {
      const unsigned __int128 prod = static_cast<unsigned __int128>(mantissa_) * c;
      const unsigned __int128 mask = (static_cast<unsigned __int128>(1) << shift_) - 1;
      const double frac = std::ldexp(static_cast<double>(prod & mask), -shift_);
      return negative_ ? -frac : frac;
    }
  }
  return 0.0;
}

CubeList::CubeList(const WeylSumSpec& spec) : CubeList(spec.bases()) {}

CubeList::CubeList(std::vector<std::uint64_t> bases) {
  cubes_.reserve(bases.size());
  for (std::uint64_t x : bases) {
    require(x <= 2'642'245, "Weyl sum base too large for 64-bit cubes");
    const std::uint64_t c = x * x * x;
    cubes_.push_back(c);
    max_cube_ = std::max(max_cube_, c);
  }
}

namespace {

constexpr std::size_t kBlock = 4096;

template <typename PhaseFn>
std::complex<double> blocked_sum(const std::vector<std::uint64_t>& cubes, PhaseFn&& phase) {
  thread_local std::vector<double> buffer;
  buffer.resize(std::min(kBlock, cubes.size()));
  const auto& k = simd::active();
  CompensatedComplexSum acc;
  for (std::size_t start = 0; start < cubes.size(); start += kBlock) {
    const std::size_t len = std::min(kBlock, cubes.size() - start);
    for (std::size_t i = 0; i < len; ++i) buffer[i] = phase(cubes[start + i]);
    acc.add(k.unit_phase_sum(std::span<const double>(buffer.data(), len)));
  }
  return acc.value();
}

}  // namespace

std::complex<double> CubeList::evaluate(double alpha) const {
  const ExactPhase phase(alpha);
  return blocked_sum(cubes_, phase);
}

std::complex<double> CubeList::evaluate_rational(std::int64_t a, std::uint64_t q, double beta) const {
  require(q >= 1, "denominator must be positive");
  const std::uint64_t ar = detail::reduce_signed(a, q);
  const double inv_q = 1.0 / static_cast<double>(q);
  const ExactPhase tail(beta);
  return blocked_sum(cubes_, [&](std::uint64_t c) {
    const std::uint64_t r = detail::mulmod(ar, c % q, q);
    return static_cast<double>(r) * inv_q + tail(c);
  });
}

std::complex<double> weyl_sum(double alpha, const WeylSumSpec& spec) {
  return CubeList(spec).evaluate(alpha);
}

}  // namespace minicubes
