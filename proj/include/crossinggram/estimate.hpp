#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <crossinggram/lattice.hpp>
#include <crossinggram/parallel.hpp>
#include <crossinggram/report.hpp>
#include <crossinggram/simulate.hpp>

namespace crossinggram {

// Empirical uniform scores U_j(y) = #{l : X_l(y) <= X_j(y)} / (n + 1), stored
// as the integer counts so every sum over scores is exact.
class RankScores {
 public:
  RankScores(Region domain, std::size_t n, std::vector<std::uint32_t> counts);

  const Region& domain() const noexcept { return domain_; }
  std::size_t n() const noexcept { return n_; }
  std::uint32_t count(std::size_t replicate, std::size_t site) const { return counts_[site * n_ + replicate]; }
  double score(std::size_t replicate, std::size_t site) const {
    return static_cast<double>(count(replicate, site)) / static_cast<double>(n_ + 1);
  }
  std::span<const std::uint32_t> column(std::size_t site) const { return {counts_.data() + site * n_, n_}; }

  // Sites with at least one tie, and observations sharing a value with another.
  std::size_t tied_sites() const noexcept { return tied_sites_; }
  std::size_t tied_observations() const noexcept { return tied_observations_; }

 private:
  friend RankScores rank_transform(const FieldSample&, Execution);

  Region domain_;
  std::size_t n_;
  std::vector<std::uint32_t> counts_;
  std::size_t tied_sites_ = 0;
  std::size_t tied_observations_ = 0;
};

RankScores rank_transform(const FieldSample& sample, Execution exec = {});

// 1 / (1 - mean_j max_{y in I} U_j(y)) - 1.
double theta_hat(const RankScores& scores, const Region& subset);

enum class SupportPolicy {
  // dilate(A, d) must be sampled; otherwise MissingSupport.
  require,
  // V(x) is intersected with the sampled domain and the neighbourhood-size
  // sum is reduced to match. Flagged in the report.
  clip,
};

CoefficientReport zeta_hat(const RankScores& scores, const Region& region, double d = 1.0,
                           NormKind norm = NormKind::euclidean, SupportPolicy policy = SupportPolicy::require,
                           Execution exec = {});

CoefficientReport zeta_star_hat(const RankScores& scores, const Region& region, double d = 1.0,
                                NormKind norm = NormKind::euclidean, SupportPolicy policy = SupportPolicy::require,
                                Execution exec = {});

// theta_hat({x1, x2}) - 1. Both sites are assumed to share a model cell.
double beta_hat(const RankScores& scores, LatticePoint x1, LatticePoint x2);

// Convenience overloads that rank the sample first.
CoefficientReport zeta_hat(const FieldSample& sample, const Region& region, double d = 1.0,
                           NormKind norm = NormKind::euclidean, SupportPolicy policy = SupportPolicy::require,
                           Execution exec = {});
CoefficientReport zeta_star_hat(const FieldSample& sample, const Region& region, double d = 1.0,
                                NormKind norm = NormKind::euclidean, SupportPolicy policy = SupportPolicy::require,
                                Execution exec = {});
double beta_hat(const FieldSample& sample, LatticePoint x1, LatticePoint x2);

}  // namespace crossinggram
