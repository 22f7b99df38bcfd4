#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <crossinggram/lattice.hpp>

namespace crossinggram {

enum class CoefficientKind { theta, lambda_pair, lambda_cond, gamma, zeta, zeta_star };
enum class Method { exact, rank_estimate, finite_u };

std::string_view to_string(CoefficientKind kind);
std::string_view to_string(Method method);

struct SiteValue {
  LatticePoint site;
  double value = 0.0;
};

// One computed coefficient together with what produced it.
struct CoefficientReport {
  CoefficientReport(Region region_, double d_, NormKind norm_, CoefficientKind kind_, Method method_)
      : region(std::move(region_)), d(d_), norm(norm_), kind(kind_), method(method_) {}

  Region region;
  double d = 1.0;
  NormKind norm = NormKind::euclidean;
  CoefficientKind kind = CoefficientKind::zeta;
  Method method = Method::exact;
  // Raw value; rank estimates may fall slightly outside [0, 1].
  double value = 0.0;
  std::optional<double> clamped;
  // Per-site theta(V(x)) (or its estimate) in region order.
  std::vector<SiteValue> per_site;
  // True when V(x) was intersected with the sampled domain.
  bool clipped = false;
  std::map<std::string, double> diagnostics;
};

double clamp_unit(double v);

}  // namespace crossinggram
