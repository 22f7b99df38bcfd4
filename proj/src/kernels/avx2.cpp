#include <immintrin.h>

#include <algorithm>

#include <crossinggram/kernels.hpp>

namespace crossinggram::kernels {
namespace {

std::uint64_t max_rank_sum(const std::uint32_t* const* columns, std::size_t k, std::size_t n) {
  __m256i acc_lo = _mm256_setzero_si256();
  __m256i acc_hi = _mm256_setzero_si256();
  std::size_t j = 0;
  for (; j + 8 <= n; j += 8) {
    __m256i m = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(columns[0] + j));
    for (std::size_t c = 1; c < k; ++c) {
      m = _mm256_max_epu32(m, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(columns[c] + j)));
    }
    acc_lo = _mm256_add_epi64(acc_lo, _mm256_cvtepu32_epi64(_mm256_castsi256_si128(m)));
    acc_hi = _mm256_add_epi64(acc_hi, _mm256_cvtepu32_epi64(_mm256_extracti128_si256(m, 1)));
  }
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), _mm256_add_epi64(acc_lo, acc_hi));
  std::uint64_t total = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; j < n; ++j) {
    std::uint32_t m = columns[0][j];
    for (std::size_t c = 1; c < k; ++c) m = std::max(m, columns[c][j]);
    total += m;
  }
  return total;
}

void exceed_mask(const double* scores, std::size_t n, double level, std::uint8_t* out) {
  const __m256d u = _mm256_set1_pd(level);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const int bits = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(scores + j), u, _CMP_GT_OQ));
    out[j] = bits & 1;
    out[j + 1] = (bits >> 1) & 1;
    out[j + 2] = (bits >> 2) & 1;
    out[j + 3] = (bits >> 3) & 1;
  }
  for (; j < n; ++j) out[j] = scores[j] > level ? 1 : 0;
}

inline __m256i load8_u8(const std::uint8_t* p) {
  return _mm256_cvtepu8_epi32(_mm_loadl_epi64(reinterpret_cast<const __m128i*>(p)));
}

inline void add8_u32(std::uint32_t* p, __m256i v) {
  auto* q = reinterpret_cast<__m256i*>(p);
  _mm256_storeu_si256(q, _mm256_add_epi32(_mm256_loadu_si256(q), v));
}

void accumulate_site(const std::uint8_t* self, const std::uint8_t* const* neighbors, std::size_t k, std::size_t n,
                     const LevelAccumulators& acc) {
  const __m256i one = _mm256_set1_epi32(1);
  const __m256i zero = _mm256_setzero_si256();
  std::size_t j = 0;
  for (; j + 8 <= n; j += 8) {
    __m256i count = zero;
    for (std::size_t c = 0; c < k; ++c) count = _mm256_add_epi32(count, load8_u8(neighbors[c] + j));
    const __m256i s = load8_u8(self + j);
    const __m256i below = _mm256_sub_epi32(one, s);
    const __m256i any = _mm256_andnot_si256(_mm256_cmpeq_epi32(count, zero), one);

    auto* flag = reinterpret_cast<__m128i*>(acc.any_exceed + j);
    _mm_storel_epi64(flag,
                     _mm_or_si128(_mm_loadl_epi64(flag), _mm_loadl_epi64(reinterpret_cast<const __m128i*>(self + j))));

    add8_u32(acc.oscillations + j, _mm256_and_si256(below, any));
    add8_u32(acc.vmax_exceed + j, _mm256_or_si256(s, any));
    add8_u32(acc.self_exceed + j, s);
    add8_u32(acc.neighbor_exceed + j, count);
    add8_u32(acc.pair_oscillations + j, _mm256_mullo_epi32(below, count));
  }
  for (; j < n; ++j) {
    std::uint32_t count = 0;
    for (std::size_t c = 0; c < k; ++c) count += neighbors[c][j];
    const std::uint32_t s = self[j];
    const std::uint32_t below = 1u - s;
    const std::uint32_t any = count > 0 ? 1u : 0u;
    acc.any_exceed[j] |= self[j];
    acc.oscillations[j] += below & any;
    acc.vmax_exceed[j] += s | any;
    acc.self_exceed[j] += s;
    acc.neighbor_exceed[j] += count;
    acc.pair_oscillations[j] += below * count;
  }
}

void max_stable_combine(const double* y, const double* r, double beta, std::size_t n, double* out) {
  const __m256d b = _mm256_set1_pd(beta);
  const __m256d w = _mm256_set1_pd(1.0 - beta);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d a = _mm256_mul_pd(_mm256_loadu_pd(y + j), b);
    const __m256d c = _mm256_mul_pd(_mm256_loadu_pd(r + j), w);
    _mm256_storeu_pd(out + j, _mm256_max_pd(a, c));
  }
  const double wj = 1.0 - beta;
  for (; j < n; ++j) {
    const double a = y[j] * beta;
    const double c = r[j] * wj;
    out[j] = a < c ? c : a;
  }
}

}  // namespace

const KernelTable& avx2_kernels_unchecked() noexcept {
  static const KernelTable table{"avx2", max_rank_sum, exceed_mask, accumulate_site, max_stable_combine};
  return table;
}

}  // namespace crossinggram::kernels
