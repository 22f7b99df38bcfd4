#include <crossinggram/model.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>

#include <crossinggram/errors.hpp>
#include <crossinggram/numeric.hpp>

namespace crossinggram {

std::string_view to_string(CoefficientKind kind) {
  switch (kind) {
    case CoefficientKind::theta: return "theta";
    case CoefficientKind::lambda_pair: return "lambda_pair";
    case CoefficientKind::lambda_cond: return "lambda_cond";
    case CoefficientKind::gamma: return "gamma";
    case CoefficientKind::zeta: return "zeta";
    case CoefficientKind::zeta_star: return "zeta_star";
  }
  return "zeta";
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::exact: return "exact";
    case Method::rank_estimate: return "rank_estimate";
    case Method::finite_u: return "finite_u";
  }
  return "exact";
}

double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

namespace {

void check_beta(double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw ConfigError("beta must lie in (0, 1], got " + std::to_string(beta));
  }
}

}  // namespace

PartitionModel::PartitionModel(std::vector<Cell> cells) : cells_(std::move(cells)) {
  if (cells_.empty()) throw ConfigError("partition model needs at least one cell");
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    check_beta(cells_[i].beta);
    const bool catch_all = !cells_[i].contains;
    if (catch_all != (i + 1 == cells_.size())) {
      throw ConfigError("the last cell (and only the last) must be the catch-all cell");
    }
  }
}

PartitionModel PartitionModel::annuli(std::vector<double> radii, std::vector<double> betas) {
  if (betas.size() != radii.size() + 1) {
    throw ConfigError("betas must have exactly one more entry than annulus radii");
  }
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || !std::isfinite(radii[i]) || (i > 0 && !(radii[i] > radii[i - 1]))) {
      throw ConfigError("annulus radii must be positive, finite and strictly increasing");
    }
  }
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const long double r2 = static_cast<long double>(radii[i]) * radii[i];
    cells.push_back({[r2](LatticePoint x) { return squared_norm(x) < r2; }, betas[i]});
  }
  cells.push_back({{}, betas.back()});
  PartitionModel model(std::move(cells));
  model.radii_ = std::move(radii);
  return model;
}

PartitionModel PartitionModel::constant(double beta) { return annuli({}, {beta}); }

std::size_t PartitionModel::cell_of(LatticePoint x) const {
  for (std::size_t i = 0; i + 1 < cells_.size(); ++i) {
    if (cells_[i].contains(x)) return i;
  }
  return cells_.size() - 1;
}

std::vector<double> PartitionModel::betas() const {
  std::vector<double> out;
  out.reserve(cells_.size());
  for (const auto& c : cells_) out.push_back(c.beta);
  return out;
}

PartitionModel PartitionModel::with_beta(std::size_t cell, double beta) const {
  check_beta(beta);
  PartitionModel copy = *this;
  copy.cells_.at(cell).beta = beta;
  return copy;
}

double theta_exact(const PartitionModel& model, const Region& points) {
  CompensatedSum sum;
  double max_complement = 0.0;
  for (const auto& y : points) {
    const double b = model.beta_at(y);
    sum += b;
    max_complement = std::max(max_complement, 1.0 - b);
  }
  sum += max_complement;
  return sum.value();
}

double theta_pair_exact(const PartitionModel& model, LatticePoint x1, LatticePoint x2) {
  if (x1 == x2) throw ConfigError("theta_pair_exact requires two distinct sites");
  const auto c1 = model.cell_of(x1);
  const auto c2 = model.cell_of(x2);
  if (c1 == c2) return 1.0 + model.cell_beta(c1);
  return 1.0 + std::max(model.cell_beta(c1), model.cell_beta(c2));
}

double lambda_pair_exact(const PartitionModel& model, LatticePoint x1, LatticePoint x2) {
  return 2.0 - theta_pair_exact(model, x1, x2);
}

double lambda_conditional_exact(const PartitionModel& model, const Region& subset, const Region& region) {
  return theta_exact(model, subset) / theta_exact(model, region);
}

double gamma_exact(const PartitionModel& model, const Region& region) {
  if (region.size() < 2) throw ConfigError("gamma requires a region with at least two sites");
  return (theta_exact(model, region) - 1.0) / static_cast<double>(region.size() - 1);
}

namespace {

std::vector<double> site_thetas(const PartitionModel& model, const Region& region,
                                std::span<const LatticePoint> offsets) {
  std::vector<double> out;
  out.reserve(region.size());
  std::vector<LatticePoint> nbhd(offsets.size());
  for (const auto& x : region) {
    for (std::size_t k = 0; k < offsets.size(); ++k) nbhd[k] = x + offsets[k];
    out.push_back(theta_exact(model, Region(nbhd)));
  }
  return out;
}

double zeta_from_thetas(std::span<const double> thetas, std::size_t region_size, std::size_t v_size) {
  const double v_total = static_cast<double>(region_size * v_size);
  CompensatedSum theta_sum;
  for (double t : thetas) theta_sum += t;
  return (v_total - theta_sum.value()) / (v_total - static_cast<double>(region_size));
}

}  // namespace

double zeta_exact(const PartitionModel& model, const Region& region, double d, NormKind norm) {
  const auto offsets = stencil(d, norm);
  if (offsets.size() < 2) throw NumericalError("neighbourhood holds only the centre site; zeta undefined");
  const auto thetas = site_thetas(model, region, offsets);
  return zeta_from_thetas(thetas, region.size(), offsets.size());
}

double zeta_star_exact(const PartitionModel& model, const Region& region, double d, NormKind norm) {
  const auto offsets = stencil(d, norm);
  if (offsets.size() < 2) throw NumericalError("neighbourhood holds only the centre site; zeta* undefined");
  CompensatedSum lambda_sum;
  std::size_t pairs = 0;
  for (const auto& x : region) {
    for (const auto& o : offsets) {
      if (o == LatticePoint{}) continue;
      lambda_sum += lambda_pair_exact(model, x, x + o);
      ++pairs;
    }
  }
  return lambda_sum.value() / static_cast<double>(pairs);
}

namespace {

void check_joint_args(std::span<const LatticePoint> points, std::span<const double> z) {
  if (points.empty() || points.size() != z.size()) {
    throw ConfigError("joint law needs equally many (>= 1) sites and thresholds");
  }
  for (double v : z) {
    if (!(v > 0.0)) throw ConfigError("joint law thresholds must be positive");
  }
  std::vector<LatticePoint> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ConfigError("joint law sites must be distinct");
  }
}

}  // namespace

double exponent_function_exact(const PartitionModel& model, std::span<const LatticePoint> points,
                               std::span<const double> z) {
  check_joint_args(points, z);
  CompensatedSum sum;
  double max_term = 0.0;
  for (std::size_t j = 0; j < points.size(); ++j) {
    const double b = model.beta_at(points[j]);
    const double inv = std::isinf(z[j]) ? 0.0 : 1.0 / z[j];
    sum += inv * b;
    max_term = std::max(max_term, inv * (1.0 - b));
  }
  sum += max_term;
  return sum.value();
}

double joint_cdf_exact(const PartitionModel& model, std::span<const LatticePoint> points, std::span<const double> z) {
  return std::exp(-exponent_function_exact(model, points, z));
}

std::string model_fingerprint(const PartitionModel& model) {
  std::string canon = model.radii() ? "annuli:" : "cells:";
  char buf[32];
  if (model.radii()) {
    for (double r : *model.radii()) {
      std::snprintf(buf, sizeof buf, "%.17g,", r);
      canon += buf;
    }
  }
  canon += "|";
  for (double b : model.betas()) {
    std::snprintf(buf, sizeof buf, "%.17g,", b);
    canon += buf;
  }
  std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
  for (unsigned char c : canon) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ExactSummary exact_summary(const PartitionModel& model, const Region& region, double d, NormKind norm) {
  const auto offsets = stencil(d, norm);
  if (offsets.size() < 2) throw NumericalError("neighbourhood holds only the centre site; zeta undefined");
  const auto thetas = site_thetas(model, region, offsets);

  ExactSummary s{theta_exact(model, region), std::nullopt,
                 CoefficientReport{region, d, norm, CoefficientKind::zeta, Method::exact},
                 CoefficientReport{region, d, norm, CoefficientKind::zeta_star, Method::exact}};
  if (region.size() >= 2) s.gamma = gamma_exact(model, region);

  s.zeta.value = zeta_from_thetas(thetas, region.size(), offsets.size());
  s.zeta.clamped = clamp_unit(s.zeta.value);
  s.zeta.per_site.reserve(region.size());
  for (std::size_t i = 0; i < region.size(); ++i) s.zeta.per_site.push_back({region[i], thetas[i]});
  const auto [lo, hi] = std::minmax_element(thetas.begin(), thetas.end());
  s.zeta.diagnostics["theta_region"] = s.theta_region;
  s.zeta.diagnostics["theta_v_min"] = *lo;
  s.zeta.diagnostics["theta_v_max"] = *hi;
  s.zeta.diagnostics["v_sum"] = static_cast<double>(region.size() * offsets.size());

  s.zeta_star.value = zeta_star_exact(model, region, d, norm);
  s.zeta_star.clamped = clamp_unit(s.zeta_star.value);
  return s;
}

}  // namespace crossinggram
