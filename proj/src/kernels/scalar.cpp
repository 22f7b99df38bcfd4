#include <algorithm>

#include <crossinggram/kernels.hpp>

namespace crossinggram::kernels {
namespace {

std::uint64_t max_rank_sum(const std::uint32_t* const* columns, std::size_t k, std::size_t n) {
  std::uint64_t total = 0;
  for (std::size_t j = 0; j < n; ++j) {
    std::uint32_t m = columns[0][j];
    for (std::size_t c = 1; c < k; ++c) m = std::max(m, columns[c][j]);
    total += m;
  }
  return total;
}

void exceed_mask(const double* scores, std::size_t n, double level, std::uint8_t* out) {
  for (std::size_t j = 0; j < n; ++j) out[j] = scores[j] > level ? 1 : 0;
}

void accumulate_site(const std::uint8_t* self, const std::uint8_t* const* neighbors, std::size_t k, std::size_t n,
                     const LevelAccumulators& acc) {
  for (std::size_t j = 0; j < n; ++j) {
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
  const double w = 1.0 - beta;
  for (std::size_t j = 0; j < n; ++j) {
    const double a = y[j] * beta;
    const double b = r[j] * w;
    out[j] = a < b ? b : a;
  }
}

}  // namespace

const KernelTable& scalar_kernels() noexcept {
  static const KernelTable table{"scalar", max_rank_sum, exceed_mask, accumulate_site, max_stable_combine};
  return table;
}

}  // namespace crossinggram::kernels
