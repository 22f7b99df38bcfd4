#include <crossinggram/estimate.hpp>

#include <algorithm>
#include <limits>
#include <numeric>

#include <crossinggram/errors.hpp>
#include <crossinggram/kernels.hpp>
#include <crossinggram/numeric.hpp>

namespace crossinggram {

RankScores::RankScores(Region domain, std::size_t n, std::vector<std::uint32_t> counts)
    : domain_(std::move(domain)), n_(n), counts_(std::move(counts)) {
  if (n_ < 2) throw ConfigError("rank scores need at least two replicates");
  if (counts_.size() != n_ * domain_.size()) throw DataError("rank score matrix has the wrong shape");
  for (auto c : counts_) {
    if (c < 1 || c > n_) throw DataError("rank count outside [1, n]");
  }
}

RankScores rank_transform(const FieldSample& sample, Execution exec) {
  const std::size_t n = sample.n();
  if (n < 2) throw ConfigError("rank transform needs at least two replicates");
  if (n > std::numeric_limits<std::uint32_t>::max()) throw ConfigError("too many replicates for rank scores");
  const std::size_t sites = sample.sites();
  std::vector<std::uint32_t> counts(n * sites);
  std::vector<std::size_t> tied_per_site(sites, 0);

  parallel_for(sites, exec, [&](std::size_t begin, std::size_t end) {
    std::vector<std::uint32_t> order(n);
    for (std::size_t i = begin; i < end; ++i) {
      const auto col = sample.column(i);
      std::iota(order.begin(), order.end(), 0u);
      std::sort(order.begin(), order.end(), [&](auto a, auto b) { return col[a] < col[b]; });
      auto* out = counts.data() + i * n;
      // Each run of equal values gets the index one past its last member.
      std::size_t run_start = 0;
      for (std::size_t p = 1; p <= n; ++p) {
        if (p == n || col[order[p]] != col[order[run_start]]) {
          for (std::size_t q = run_start; q < p; ++q) out[order[q]] = static_cast<std::uint32_t>(p);
          if (p - run_start > 1) tied_per_site[i] += p - run_start;
          run_start = p;
        }
      }
    }
  });

  RankScores scores(sample.domain(), n, std::move(counts));
  for (auto t : tied_per_site) {
    if (t > 0) ++scores.tied_sites_;
    scores.tied_observations_ += t;
  }
  return scores;
}

namespace {

std::vector<const std::uint32_t*> columns_for(const RankScores& scores, std::span<const LatticePoint> points) {
  std::vector<const std::uint32_t*> cols;
  std::vector<LatticePoint> missing;
  cols.reserve(points.size());
  for (const auto& p : points) {
    if (auto idx = scores.domain().index_of(p)) {
      cols.push_back(scores.column(*idx).data());
    } else {
      missing.push_back(p);
    }
  }
  if (!missing.empty()) throw MissingSupport(std::move(missing));
  return cols;
}

double theta_from_columns(const std::vector<const std::uint32_t*>& cols, std::size_t n) {
  const std::uint64_t sum = kernels::active_kernels().max_rank_sum(cols.data(), cols.size(), n);
  const double denom = static_cast<double>(n) * static_cast<double>(n + 1);
  const double mean_max = static_cast<double>(sum) / denom;
  if (!(mean_max < 1.0)) throw NumericalError("degenerate extremal coefficient estimate (mean maximum score is 1)");
  return 1.0 / (1.0 - mean_max) - 1.0;
}

// Checks that A (and, unless clipping, dilate(A, d)) is sampled. Returns, per
// x in A, the sampled neighbourhood V(x) as points.
std::vector<std::vector<LatticePoint>> sampled_neighborhoods(const RankScores& scores, const Region& region,
                                                             const std::vector<LatticePoint>& offsets,
                                                             SupportPolicy policy) {
  const auto& domain = scores.domain();
  std::vector<LatticePoint> missing;
  std::vector<std::vector<LatticePoint>> out;
  out.reserve(region.size());
  for (const auto& x : region) {
    auto& nb = out.emplace_back();
    for (const auto& o : offsets) {
      const auto y = x + o;
      if (domain.contains(y)) {
        nb.push_back(y);
      } else if (policy == SupportPolicy::require || o == LatticePoint{}) {
        missing.push_back(y);
      }
    }
  }
  if (!missing.empty()) {
    std::sort(missing.begin(), missing.end());
    missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
    throw MissingSupport(std::move(missing));
  }
  return out;
}

void add_tie_diagnostics(CoefficientReport& report, const RankScores& scores) {
  report.diagnostics["n"] = static_cast<double>(scores.n());
  report.diagnostics["tied_sites"] = static_cast<double>(scores.tied_sites());
  report.diagnostics["tied_observations"] = static_cast<double>(scores.tied_observations());
}

}  // namespace

double theta_hat(const RankScores& scores, const Region& subset) {
  return theta_from_columns(columns_for(scores, subset.points()), scores.n());
}

double beta_hat(const RankScores& scores, LatticePoint x1, LatticePoint x2) {
  if (x1 == x2) throw ConfigError("beta_hat requires two distinct sites");
  return theta_hat(scores, Region{x1, x2}) - 1.0;
}

CoefficientReport zeta_hat(const RankScores& scores, const Region& region, double d, NormKind norm,
                           SupportPolicy policy, Execution exec) {
  const auto offsets = stencil(d, norm);
  const auto nbhds = sampled_neighborhoods(scores, region, offsets, policy);

  std::vector<double> thetas(region.size());
  parallel_for(region.size(), exec, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) thetas[i] = theta_from_columns(columns_for(scores, nbhds[i]), scores.n());
  });

  std::int64_t v_total = 0;
  for (const auto& nb : nbhds) v_total += static_cast<std::int64_t>(nb.size());
  const auto a_size = static_cast<std::int64_t>(region.size());
  if (v_total == a_size) throw NumericalError("no sampled neighbours; zeta estimate undefined");

  CompensatedSum theta_sum;
  for (double t : thetas) theta_sum += t;

  CoefficientReport report{region, d, norm, CoefficientKind::zeta, Method::rank_estimate};
  report.value = (static_cast<double>(v_total) - theta_sum.value()) / static_cast<double>(v_total - a_size);
  report.clamped = clamp_unit(report.value);
  report.clipped = v_total != v_sum(region, d, norm);
  report.per_site.reserve(region.size());
  for (std::size_t i = 0; i < region.size(); ++i) report.per_site.push_back({region[i], thetas[i]});
  report.diagnostics["v_sum"] = static_cast<double>(v_total);
  add_tie_diagnostics(report, scores);
  return report;
}

CoefficientReport zeta_star_hat(const RankScores& scores, const Region& region, double d, NormKind norm,
                                SupportPolicy policy, Execution exec) {
  const auto offsets = stencil(d, norm);
  const auto nbhds = sampled_neighborhoods(scores, region, offsets, policy);

  std::vector<double> site_sums(region.size());
  std::vector<std::size_t> site_pairs(region.size());
  parallel_for(region.size(), exec, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto x = region[i];
      const auto x_col = columns_for(scores, std::span(&x, 1)).front();
      CompensatedSum s;
      for (const auto& y : nbhds[i]) {
        if (y == x) continue;
        const std::vector<const std::uint32_t*> cols{x_col, columns_for(scores, std::span(&y, 1)).front()};
        s += 2.0 - theta_from_columns(cols, scores.n());
        ++site_pairs[i];
      }
      site_sums[i] = s.value();
    }
  });

  CompensatedSum total;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < region.size(); ++i) {
    total += site_sums[i];
    pairs += site_pairs[i];
  }
  if (pairs == 0) throw NumericalError("no sampled neighbour pairs; zeta* estimate undefined");

  CoefficientReport report{region, d, norm, CoefficientKind::zeta_star, Method::rank_estimate};
  report.value = total.value() / static_cast<double>(pairs);
  report.clamped = clamp_unit(report.value);
  report.clipped = pairs != region.size() * (offsets.size() - 1);
  report.diagnostics["pairs"] = static_cast<double>(pairs);
  add_tie_diagnostics(report, scores);
  return report;
}

CoefficientReport zeta_hat(const FieldSample& sample, const Region& region, double d, NormKind norm,
                           SupportPolicy policy, Execution exec) {
  return zeta_hat(rank_transform(sample, exec), region, d, norm, policy, exec);
}

CoefficientReport zeta_star_hat(const FieldSample& sample, const Region& region, double d, NormKind norm,
                                SupportPolicy policy, Execution exec) {
  return zeta_star_hat(rank_transform(sample, exec), region, d, norm, policy, exec);
}

double beta_hat(const FieldSample& sample, LatticePoint x1, LatticePoint x2) {
  return beta_hat(rank_transform(sample), x1, x2);
}

}  // namespace crossinggram
