#pragma once

#include <cstddef>
#include <cstdint>

// Data-parallel inner loops. Every kernel has a scalar reference version and,
// on x86-64, an AVX2 version selected at runtime. All kernels are exact
// (integer arithmetic or single IEEE operations), so the variants must agree
// bit for bit.
namespace crossinggram::kernels {

// Per-replicate accumulators for one level u, indexed by replicate.
struct LevelAccumulators {
  std::uint8_t* any_exceed;          // some x in A has U(x) > u
  std::uint32_t* oscillations;       // #{x : U(x) <= u < max_{V(x)} U}
  std::uint32_t* vmax_exceed;        // #{x : max_{V(x)} U > u}
  std::uint32_t* self_exceed;        // #{x : U(x) > u}
  std::uint32_t* neighbor_exceed;    // sum_x #{y in V(x) - {x} : U(y) > u}
  std::uint32_t* pair_oscillations;  // sum_x #{y in V(x) - {x} : U(x) <= u < U(y)}
};

struct KernelTable {
  const char* name;

  // sum_j max_k columns[k][j]; k >= 1.
  std::uint64_t (*max_rank_sum)(const std::uint32_t* const* columns, std::size_t k, std::size_t n);

  // out[j] = scores[j] > level.
  void (*exceed_mask)(const double* scores, std::size_t n, double level, std::uint8_t* out);

  // Adds the contribution of one site x, given its own exceedance mask and
  // the masks of V(x) - {x}, to replicates [0, n).
  void (*accumulate_site)(const std::uint8_t* self, const std::uint8_t* const* neighbors, std::size_t k, std::size_t n,
                          const LevelAccumulators& acc);

  // out[j] = max(y[j] * beta, r[j] * (1 - beta)).
  void (*max_stable_combine)(const double* y, const double* r, double beta, std::size_t n, double* out);
};

const KernelTable& scalar_kernels() noexcept;

// nullptr when AVX2 is not compiled in or not supported by this CPU.
const KernelTable* avx2_kernels() noexcept;

// AVX2 when available, unless CROSSINGGRAM_SIMD=scalar is set.
const KernelTable& active_kernels() noexcept;

}  // namespace crossinggram::kernels
