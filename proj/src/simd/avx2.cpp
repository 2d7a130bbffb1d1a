#include <immintrin.h>

#include <cmath>
#include <numbers>

#include "minicubes/accumulate.hpp"
#include "simd_impl.hpp"

namespace minicubes::simd::detail {

namespace {

const __m256d kSignMask = _mm256_set1_pd(-0.0);

// Four-lane Neumaier accumulator.
struct LaneSum {
  __m256d sum = _mm256_setzero_pd();
  __m256d comp = _mm256_setzero_pd();

  void add(__m256d x) {
    const __m256d t = _mm256_add_pd(sum, x);
    const __m256d abs_sum = _mm256_andnot_pd(kSignMask, sum);
    const __m256d abs_x = _mm256_andnot_pd(kSignMask, x);
    const __m256d big_sum = _mm256_cmp_pd(abs_sum, abs_x, _CMP_GE_OQ);
    const __m256d if_sum = _mm256_add_pd(_mm256_sub_pd(sum, t), x);
    const __m256d if_x = _mm256_add_pd(_mm256_sub_pd(x, t), sum);
    comp = _mm256_add_pd(comp, _mm256_blendv_pd(if_x, if_sum, big_sum));
    sum = t;
  }

  void drain(CompensatedSum& out) const {
    alignas(32) double s[4];
    alignas(32) double c[4];
    _mm256_store_pd(s, sum);
    _mm256_store_pd(c, comp);
    for (int i = 0; i < 4; ++i) {
      out.add(s[i]);
      out.add(c[i]);
    }
  }
};

struct CosSin {
  __m256d c;
  __m256d s;
};

// cos and sin of 2 pi theta. The phase is folded to a quarter turn
// x = (4r - k) pi/2 with |x| <= pi/4, then Taylor polynomials of degree 16/17
// are exact to well below double rounding on that interval.
inline CosSin unit_root(__m256d theta) {
  constexpr int kNearest = _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC;
  const __m256d r = _mm256_sub_pd(theta, _mm256_round_pd(theta, kNearest));
  const __m256d t = _mm256_mul_pd(r, _mm256_set1_pd(4.0));
  const __m256d k = _mm256_round_pd(t, kNearest);
  const __m256d x = _mm256_mul_pd(_mm256_sub_pd(t, k), _mm256_set1_pd(std::numbers::pi / 2));
  const __m256d x2 = _mm256_mul_pd(x, x);

  __m256d sp = _mm256_set1_pd(1.0 / 355687428096000.0);
  sp = _mm256_fmadd_pd(sp, x2, _mm256_set1_pd(-1.0 / 1307674368000.0));
  sp = _mm256_fmadd_pd(sp, x2, _mm256_set1_pd(1.0 / 6227020800.0));
  sp = _mm256_fmadd_pd(sp, x2, _mm256_set1_pd(-1.0 / 39916800.0));
  sp = _mm256_fmadd_pd(sp, x2, _mm256_set1_pd(1.0 / 362880.0));
  sp = _mm256_fmadd_pd(sp, x2, _mm256_set1_pd(-1.0 / 5040.0));
  sp = _mm256_fmadd_pd(sp, x2, _mm256_set1_pd(1.0 / 120.0));
  sp = _mm256_fmadd_pd(sp, x2, _mm256_set1_pd(-1.0 / 6.0));
  sp = _mm256_mul_pd(sp, x2);
  const __m256d sn = _mm256_fmadd_pd(sp, x, x);

  __m256d cp = _mm256_set1_pd(1.0 / 20922789888000.0);
  cp = _mm256_fmadd_pd(cp, x2, _mm256_set1_pd(-1.0 / 87178291200.0));
  cp = _mm256_fmadd_pd(cp, x2, _mm256_set1_pd(1.0 / 479001600.0));
  cp = _mm256_fmadd_pd(cp, x2, _mm256_set1_pd(-1.0 / 3628800.0));
  cp = _mm256_fmadd_pd(cp, x2, _mm256_set1_pd(1.0 / 40320.0));
  cp = _mm256_fmadd_pd(cp, x2, _mm256_set1_pd(-1.0 / 720.0));
  cp = _mm256_fmadd_pd(cp, x2, _mm256_set1_pd(1.0 / 24.0));
  cp = _mm256_fmadd_pd(cp, x2, _mm256_set1_pd(-0.5));
  const __m256d cs = _mm256_fmadd_pd(cp, x2, _mm256_set1_pd(1.0));

  // Quadrant k mod 4: odd k swaps cos and sin, k in {1,2} negates cos,
  // k in {2,3} negates sin.
  const __m256i q = _mm256_and_si256(_mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(k)),
                                     _mm256_set1_epi64x(3));
  const __m256i one = _mm256_set1_epi64x(1);
  const __m256i two = _mm256_set1_epi64x(2);
  const __m256d swap = _mm256_castsi256_pd(
      _mm256_cmpeq_epi64(_mm256_and_si256(q, one), one));
  const __m256d neg_c = _mm256_castsi256_pd(
      _mm256_cmpeq_epi64(_mm256_and_si256(_mm256_add_epi64(q, one), two), two));
  const __m256d neg_s = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q, two), two));

  __m256d c = _mm256_blendv_pd(cs, sn, swap);
  __m256d s = _mm256_blendv_pd(sn, cs, swap);
  c = _mm256_xor_pd(c, _mm256_and_pd(neg_c, kSignMask));
  s = _mm256_xor_pd(s, _mm256_and_pd(neg_s, kSignMask));
  return {c, s};
}

inline std::complex<double> scalar_root(double theta) {
  const double x = 2.0 * std::numbers::pi * (theta - std::nearbyint(theta));
  return {std::cos(x), std::sin(x)};
}

std::complex<double> unit_phase_sum_avx2(std::span<const double> phases) {
  LaneSum re, im;
  const std::size_t n = phases.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const CosSin cs = unit_root(_mm256_loadu_pd(phases.data() + i));
    re.add(cs.c);
    im.add(cs.s);
  }
  CompensatedSum out_re, out_im;
  re.drain(out_re);
  im.drain(out_im);
  for (; i < n; ++i) {
    const auto z = scalar_root(phases[i]);
    out_re.add(z.real());
    out_im.add(z.imag());
  }
  return {out_re.value(), out_im.value()};
}

std::complex<double> weighted_phase_sum_avx2(std::span<const double> phases,
                                             std::span<const double> weights) {
  LaneSum re, im;
  const std::size_t n = phases.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const CosSin cs = unit_root(_mm256_loadu_pd(phases.data() + i));
    const __m256d w = _mm256_loadu_pd(weights.data() + i);
    re.add(_mm256_mul_pd(w, cs.c));
    im.add(_mm256_mul_pd(w, cs.s));
  }
  CompensatedSum out_re, out_im;
  re.drain(out_re);
  im.drain(out_im);
  for (; i < n; ++i) {
    const auto z = weights[i] * scalar_root(phases[i]);
    out_re.add(z.real());
    out_im.add(z.imag());
  }
  return {out_re.value(), out_im.value()};
}

std::complex<double> gather_rotate_sum_avx2(std::span<const double> coef_re,
                                            std::span<const double> coef_im,
                                            std::span<const std::uint32_t> index,
                                            const double* root_re, const double* root_im) {
  LaneSum re, im;
  const std::size_t n = index.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m128i idx =
        _mm_loadu_si128(reinterpret_cast<const __m128i*>(index.data() + i));
    const __m256d rr = _mm256_i32gather_pd(root_re, idx, 8);
    const __m256d ri = _mm256_i32gather_pd(root_im, idx, 8);
    const __m256d cr = _mm256_loadu_pd(coef_re.data() + i);
    const __m256d ci = _mm256_loadu_pd(coef_im.data() + i);
    re.add(_mm256_fmsub_pd(cr, rr, _mm256_mul_pd(ci, ri)));
    im.add(_mm256_fmadd_pd(cr, ri, _mm256_mul_pd(ci, rr)));
  }
  CompensatedSum out_re, out_im;
  re.drain(out_re);
  im.drain(out_im);
  for (; i < n; ++i) {
    const double rr = root_re[index[i]];
    const double ri = root_im[index[i]];
    out_re.add(coef_re[i] * rr - coef_im[i] * ri);
    out_im.add(coef_re[i] * ri + coef_im[i] * rr);
  }
  return {out_re.value(), out_im.value()};
}

void advance_residues_avx2(std::span<std::uint32_t> residues,
                           std::span<const std::uint32_t> steps, std::uint32_t modulus) {
  const std::size_t n = residues.size();
  std::size_t i = 0;
  // r + s >= m exactly when r >= m - s, an unsigned compare done with max.
  const __m256i m = _mm256_set1_epi32(static_cast<int>(modulus));
  for (; i + 8 <= n; i += 8) {
    auto* rp = reinterpret_cast<__m256i*>(residues.data() + i);
    const __m256i r = _mm256_loadu_si256(rp);
    const __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(steps.data() + i));
    const __m256i room = _mm256_sub_epi32(m, s);
    const __m256i wrap = _mm256_cmpeq_epi32(_mm256_max_epu32(r, room), r);
    _mm256_storeu_si256(rp, _mm256_sub_epi32(_mm256_add_epi32(r, s), _mm256_and_si256(wrap, m)));
  }
  for (; i < n; ++i) {
    const std::uint32_t room = modulus - steps[i];
    residues[i] = residues[i] >= room ? residues[i] - room : residues[i] + steps[i];
  }
}

}  // namespace

const KernelSet& avx2_kernels() {
  static const KernelSet set{Isa::avx2, unit_phase_sum_avx2, weighted_phase_sum_avx2,
                             gather_rotate_sum_avx2, advance_residues_avx2};
  return set;
}

}  // namespace minicubes::simd::detail
