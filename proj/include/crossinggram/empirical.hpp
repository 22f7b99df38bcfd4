#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <crossinggram/estimate.hpp>
#include <crossinggram/lattice.hpp>
#include <crossinggram/parallel.hpp>
#include <crossinggram/simulate.hpp>

namespace crossinggram {

enum class UniformizeMode { parametric, rank };

std::string_view to_string(UniformizeMode mode);
UniformizeMode parse_uniformize_mode(std::string_view name);

// Scores U(x) in (0, 1], column-major like FieldSample. Parametric scores of
// values above about 1e16 round to exactly 1.
class UniformScores {
 public:
  UniformScores(Region domain, std::size_t n, std::vector<double> column_major);

  const Region& domain() const noexcept { return domain_; }
  std::size_t n() const noexcept { return n_; }
  double score(std::size_t replicate, std::size_t site) const { return values_[site * n_ + replicate]; }
  std::span<const double> column(std::size_t site) const { return {values_.data() + site * n_, n_}; }

 private:
  Region domain_;
  std::size_t n_;
  std::vector<double> values_;
};

// parametric: exp(-1/value), allowed only for samples with unit-Frechet
// provenance. rank: count / (n + 1) as produced by rank_transform.
UniformScores uniformize(const FieldSample& sample, UniformizeMode mode, Execution exec = {});
UniformScores uniformize(const RankScores& scores);

// Indicator totals at one level u. A replicate is "conditioning" when some
// x in A has U(x) > u. Totals are additive across disjoint replicate sets.
struct LevelCounts {
  double level = 0.0;
  std::uint64_t replicates = 0;
  std::uint64_t conditioning = 0;

  // Summed over conditioning replicates.
  std::uint64_t oscillations = 0;          // x with U(x) <= u < max_{V(x)} U
  std::uint64_t pair_oscillations = 0;     // (x, y), y in V(x)-{x}, U(x) <= u < U(y)
  std::uint64_t neighbor_exceedances = 0;  // (x, y), y in V(x)-{x}, U(y) > u
  std::uint64_t vmax_exceedances = 0;      // x with max_{V(x)} U > u
  std::uint64_t exceedances = 0;           // x with U(x) > u

  // Summed over every replicate.
  std::uint64_t oscillations_all = 0;
  std::uint64_t vmax_exceedances_all = 0;
  std::uint64_t exceedances_all = 0;

  LevelCounts& operator+=(const LevelCounts& other);
  friend bool operator==(const LevelCounts&, const LevelCounts&) = default;
};

// Requires dilate(A, d) inside the scored domain.
LevelCounts count_level(const UniformScores& scores, const Region& region, double d, NormKind norm, double level,
                        Execution exec = {});

struct LevelEstimate {
  double value = 0.0;
  std::uint64_t conditioning = 0;
};

// 1 - oscillations / neighbor_exceedances over conditioning replicates.
// Throws NoExceedances when no replicate conditions.
LevelEstimate crossinggram_from_counts(const LevelCounts& counts);
LevelEstimate zeta_star_from_counts(const LevelCounts& counts);

LevelEstimate crossinggram_at_level(const UniformScores& scores, const Region& region, double d, NormKind norm,
                                    double level, Execution exec = {});
LevelEstimate zeta_star_at_level(const UniformScores& scores, const Region& region, double d, NormKind norm,
                                 double level, Execution exec = {});

// Both sides of the tail-dependence / oscillation identity at a finite level.
//   lhs, rhs: conditional on an exceedance in A, replicate by replicate:
//     lhs = sum_x P(max_V > u | .) - sum_x P(U(x) > u | .),
//     rhs = E(#oscillations | .).
//   lhs_ratio, rhs_ratio: unconditional frequencies over P(max_A > u), the
//     form whose limit is sum_x (theta(V(x)) - 1) / theta(A).
// Each pair shares an integer numerator, so the two sides are bit-equal.
struct OscillationCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double lhs_ratio = 0.0;
  double rhs_ratio = 0.0;
  std::uint64_t conditioning = 0;
};

OscillationCheck oscillation_check_from_counts(const LevelCounts& counts);
OscillationCheck oscillation_check(const UniformScores& scores, const Region& region, double d, NormKind norm,
                                   double level, Execution exec = {});

enum class LevelStatus { ok, no_exceedances, no_neighbor_exceedances };

struct LevelRow {
  double level = 0.0;
  LevelStatus status = LevelStatus::ok;
  std::optional<double> zeta;
  std::optional<double> zeta_star;
  std::uint64_t conditioning = 0;
  std::uint64_t oscillations = 0;
  std::uint64_t exceedances = 0;
};

struct LevelSweep {
  std::vector<LevelRow> rows;
};

std::vector<double> default_levels();

LevelRow level_row(const LevelCounts& counts);

LevelSweep sweep(const UniformScores& scores, const Region& region, double d, NormKind norm,
                 std::span<const double> levels, Execution exec = {});

}  // namespace crossinggram
