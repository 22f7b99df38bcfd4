#include <crossinggram/empirical.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <crossinggram/errors.hpp>
#include <crossinggram/kernels.hpp>

namespace crossinggram {

std::string_view to_string(UniformizeMode mode) { return mode == UniformizeMode::parametric ? "parametric" : "rank"; }

UniformizeMode parse_uniformize_mode(std::string_view name) {
  if (name == "parametric") return UniformizeMode::parametric;
  if (name == "rank") return UniformizeMode::rank;
  throw ConfigError("unknown uniformize mode '" + std::string(name) + "' (expected parametric|rank)");
}

UniformScores::UniformScores(Region domain, std::size_t n, std::vector<double> column_major)
    : domain_(std::move(domain)), n_(n), values_(std::move(column_major)) {
  if (n_ == 0) throw ConfigError("uniform scores need at least one replicate");
  if (values_.size() != n_ * domain_.size()) throw DataError("uniform score matrix has the wrong shape");
}

UniformScores uniformize(const FieldSample& sample, UniformizeMode mode, Execution exec) {
  if (mode == UniformizeMode::rank) return uniformize(rank_transform(sample, exec));
  if (!sample.provenance().unit_frechet) {
    throw ConfigError("parametric scores need unit-Frechet margins; use rank mode for external samples");
  }
  std::vector<double> out(sample.values().size());
  const auto in = sample.values();
  parallel_for(out.size(), exec, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = std::exp(-1.0 / in[i]);
  });
  return UniformScores(sample.domain(), sample.n(), std::move(out));
}

UniformScores uniformize(const RankScores& scores) {
  const std::size_t n = scores.n();
  std::vector<double> out;
  out.reserve(n * scores.domain().size());
  for (std::size_t i = 0; i < scores.domain().size(); ++i) {
    for (std::size_t j = 0; j < n; ++j) out.push_back(scores.score(j, i));
  }
  return UniformScores(scores.domain(), n, std::move(out));
}

LevelCounts& LevelCounts::operator+=(const LevelCounts& o) {
  if (level != o.level && replicates != 0 && o.replicates != 0) {
    throw std::invalid_argument("cannot add level counts taken at different levels");
  }
  if (replicates == 0) level = o.level;
  replicates += o.replicates;
  conditioning += o.conditioning;
  oscillations += o.oscillations;
  pair_oscillations += o.pair_oscillations;
  neighbor_exceedances += o.neighbor_exceedances;
  vmax_exceedances += o.vmax_exceedances;
  exceedances += o.exceedances;
  oscillations_all += o.oscillations_all;
  vmax_exceedances_all += o.vmax_exceedances_all;
  exceedances_all += o.exceedances_all;
  return *this;
}

namespace {

constexpr std::size_t kBlock = 4096;

void check_level(double level) {
  if (!(level > 0.0 && level < 1.0)) throw ConfigError("level u must lie in the open interval (0, 1)");
}

}  // namespace

LevelCounts count_level(const UniformScores& scores, const Region& region, double d, NormKind norm, double level,
                        Execution exec) {
  check_level(level);
  const auto offsets = stencil(d, norm);
  const Region support = dilate(region, d, norm);
  if (!support.is_subset_of(scores.domain())) {
    std::vector<LatticePoint> missing;
    for (const auto& p : support) {
      if (!scores.domain().contains(p)) missing.push_back(p);
    }
    throw MissingSupport(std::move(missing));
  }

  // Local indices (into support) of each x and of V(x) - {x}.
  std::vector<std::size_t> support_cols(support.size());
  for (std::size_t s = 0; s < support.size(); ++s) support_cols[s] = *scores.domain().index_of(support[s]);
  std::vector<std::size_t> self_idx(region.size());
  std::vector<std::size_t> nbr_idx;
  nbr_idx.reserve(region.size() * (offsets.size() - 1));
  for (std::size_t i = 0; i < region.size(); ++i) {
    self_idx[i] = *support.index_of(region[i]);
    for (const auto& o : offsets) {
      if (o != LatticePoint{}) nbr_idx.push_back(*support.index_of(region[i] + o));
    }
  }
  const std::size_t k = offsets.size() - 1;

  const std::size_t n = scores.n();
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<LevelCounts> per_block(blocks);
  const auto& kern = kernels::active_kernels();

  parallel_for(blocks, exec, [&](std::size_t b_begin, std::size_t b_end) {
    std::vector<std::uint8_t> masks(support.size() * kBlock);
    std::vector<std::uint8_t> any(kBlock);
    std::vector<std::uint32_t> counters(5 * kBlock);
    std::vector<const std::uint8_t*> nbr_ptrs(k);

    for (std::size_t b = b_begin; b < b_end; ++b) {
      const std::size_t j0 = b * kBlock;
      const std::size_t len = std::min(kBlock, n - j0);
      for (std::size_t s = 0; s < support.size(); ++s) {
        kern.exceed_mask(scores.column(support_cols[s]).data() + j0, len, level, masks.data() + s * kBlock);
      }
      std::fill(any.begin(), any.end(), 0);
      std::fill(counters.begin(), counters.end(), 0);
      const kernels::LevelAccumulators acc{any.data(),
                                           counters.data(),
                                           counters.data() + kBlock,
                                           counters.data() + 2 * kBlock,
                                           counters.data() + 3 * kBlock,
                                           counters.data() + 4 * kBlock};
      for (std::size_t i = 0; i < region.size(); ++i) {
        for (std::size_t c = 0; c < k; ++c) nbr_ptrs[c] = masks.data() + nbr_idx[i * k + c] * kBlock;
        kern.accumulate_site(masks.data() + self_idx[i] * kBlock, nbr_ptrs.data(), k, len, acc);
      }

      LevelCounts& out = per_block[b];
      out.level = level;
      out.replicates = len;
      for (std::size_t j = 0; j < len; ++j) {
        // An oscillation at x needs a neighbour of x above u.
        if (acc.oscillations[j] > acc.neighbor_exceed[j]) {
          throw std::logic_error("oscillation count exceeds neighbour exceedance count");
        }
        out.oscillations_all += acc.oscillations[j];
        out.vmax_exceedances_all += acc.vmax_exceed[j];
        out.exceedances_all += acc.self_exceed[j];
        if (!acc.any_exceed[j]) continue;
        ++out.conditioning;
        out.oscillations += acc.oscillations[j];
        out.pair_oscillations += acc.pair_oscillations[j];
        out.neighbor_exceedances += acc.neighbor_exceed[j];
        out.vmax_exceedances += acc.vmax_exceed[j];
        out.exceedances += acc.self_exceed[j];
      }
    }
  });

  LevelCounts total;
  total.level = level;
  for (const auto& c : per_block) total += c;
  return total;
}

namespace {

LevelEstimate ratio_estimate(const LevelCounts& c, std::uint64_t numerator) {
  if (c.conditioning == 0) throw NoExceedances(c.level);
  if (c.neighbor_exceedances == 0) {
    throw NumericalError("no neighbour exceedances at u=" + std::to_string(c.level) + "; ratio undefined");
  }
  return {1.0 - static_cast<double>(numerator) / static_cast<double>(c.neighbor_exceedances), c.conditioning};
}

}  // namespace

LevelEstimate crossinggram_from_counts(const LevelCounts& counts) {
  return ratio_estimate(counts, counts.oscillations);
}

LevelEstimate zeta_star_from_counts(const LevelCounts& counts) {
  return ratio_estimate(counts, counts.pair_oscillations);
}

LevelEstimate crossinggram_at_level(const UniformScores& scores, const Region& region, double d, NormKind norm,
                                    double level, Execution exec) {
  return crossinggram_from_counts(count_level(scores, region, d, norm, level, exec));
}

LevelEstimate zeta_star_at_level(const UniformScores& scores, const Region& region, double d, NormKind norm,
                                 double level, Execution exec) {
  return zeta_star_from_counts(count_level(scores, region, d, norm, level, exec));
}

OscillationCheck oscillation_check_from_counts(const LevelCounts& c) {
  if (c.conditioning == 0) throw NoExceedances(c.level);
  const auto cond = static_cast<double>(c.conditioning);
  OscillationCheck out;
  out.conditioning = c.conditioning;
  out.lhs = static_cast<double>(c.vmax_exceedances - c.exceedances) / cond;
  out.rhs = static_cast<double>(c.oscillations) / cond;
  out.lhs_ratio = static_cast<double>(c.vmax_exceedances_all - c.exceedances_all) / cond;
  out.rhs_ratio = static_cast<double>(c.oscillations_all) / cond;
  return out;
}

OscillationCheck oscillation_check(const UniformScores& scores, const Region& region, double d, NormKind norm,
                                   double level, Execution exec) {
  return oscillation_check_from_counts(count_level(scores, region, d, norm, level, exec));
}

std::vector<double> default_levels() { return {0.90, 0.95, 0.99, 0.995}; }

LevelRow level_row(const LevelCounts& c) {
  LevelRow row;
  row.level = c.level;
  row.conditioning = c.conditioning;
  row.oscillations = c.oscillations;
  row.exceedances = c.exceedances;
  if (c.conditioning == 0) {
    row.status = LevelStatus::no_exceedances;
  } else if (c.neighbor_exceedances == 0) {
    row.status = LevelStatus::no_neighbor_exceedances;
  } else {
    row.zeta = crossinggram_from_counts(c).value;
    row.zeta_star = zeta_star_from_counts(c).value;
  }
  return row;
}

LevelSweep sweep(const UniformScores& scores, const Region& region, double d, NormKind norm,
                 std::span<const double> levels, Execution exec) {
  for (std::size_t i = 0; i < levels.size(); ++i) {
    check_level(levels[i]);
    if (i > 0 && !(levels[i] > levels[i - 1])) throw ConfigError("sweep levels must be strictly ascending");
  }
  LevelSweep out;
  for (double u : levels) out.rows.push_back(level_row(count_level(scores, region, d, norm, u, exec)));
  return out;
}

}  // namespace crossinggram
