#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <crossinggram/lattice.hpp>
#include <crossinggram/report.hpp>

namespace crossinggram {

// Partition of Z^2 into cells A_1..A_k with a dependence weight beta_i in
// (0, 1] per cell. The field is X(x) = max(Y(x) beta(x), R (1 - beta(x)))
// with Y i.i.d. unit Frechet and R an independent unit Frechet variable.
class PartitionModel {
 public:
  struct Cell {
    // Empty predicate marks the catch-all cell, which must come last.
    std::function<bool(LatticePoint)> contains;
    double beta = 1.0;
  };

  explicit PartitionModel(std::vector<Cell> cells);

  // Concentric annuli about the origin: cell i holds r_{i-1}^2 <= |x|^2 < r_i^2
  // with r_0 = 0 and r_k = infinity. Requires betas.size() == radii.size() + 1.
  static PartitionModel annuli(std::vector<double> radii, std::vector<double> betas);

  static PartitionModel constant(double beta);

  std::size_t cell_count() const noexcept { return cells_.size(); }
  std::size_t cell_of(LatticePoint x) const;
  double beta_at(LatticePoint x) const { return cells_[cell_of(x)].beta; }
  double cell_beta(std::size_t i) const { return cells_.at(i).beta; }

  // Set for models built by annuli() or constant(); used for serialization.
  const std::optional<std::vector<double>>& radii() const noexcept { return radii_; }
  std::vector<double> betas() const;

  // Copy with the beta of one cell replaced.
  PartitionModel with_beta(std::size_t cell, double beta) const;

 private:
  std::vector<Cell> cells_;
  std::optional<std::vector<double>> radii_;
};

// theta(I) = sum_{y in I} beta(y) + max_{y in I} (1 - beta(y)).
double theta_exact(const PartitionModel& model, const Region& points);

// 1 + beta_s if both sites share a cell, else 1 + max(beta_s, beta_s').
double theta_pair_exact(const PartitionModel& model, LatticePoint x1, LatticePoint x2);

// Bivariate upper tail dependence, 2 - theta(x1, x2).
double lambda_pair_exact(const PartitionModel& model, LatticePoint x1, LatticePoint x2);

// lambda(I | A) = theta(I) / theta(A).
double lambda_conditional_exact(const PartitionModel& model, const Region& subset, const Region& region);

// (theta(A) - 1) / (|A| - 1); requires |A| >= 2.
double gamma_exact(const PartitionModel& model, const Region& region);

double zeta_exact(const PartitionModel& model, const Region& region, double d = 1.0,
                  NormKind norm = NormKind::euclidean);

// Mean of lambda(x, y) over ordered neighbour pairs y in V(x) - {x}.
double zeta_star_exact(const PartitionModel& model, const Region& region, double d = 1.0,
                       NormKind norm = NormKind::euclidean);

double joint_cdf_exact(const PartitionModel& model, std::span<const LatticePoint> points, std::span<const double> z);

// -log of joint_cdf_exact; equals theta at z = (1, ..., 1).
double exponent_function_exact(const PartitionModel& model, std::span<const LatticePoint> points,
                               std::span<const double> z);

// Every closed-form coefficient for a region.
struct ExactSummary {
  double theta_region = 0.0;
  std::optional<double> gamma;
  CoefficientReport zeta;
  CoefficientReport zeta_star;
};

// Stable 64-bit hex fingerprint of the cell betas (and radii when known).
std::string model_fingerprint(const PartitionModel& model);

ExactSummary exact_summary(const PartitionModel& model, const Region& region, double d = 1.0,
                           NormKind norm = NormKind::euclidean);

}  // namespace crossinggram
