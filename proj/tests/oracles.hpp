#pragma once

// Test-only reference computations. They use plain loops over explicit point
// lists and never call the library routines they are used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include <crossinggram/lattice.hpp>

namespace oracle {

using crossinggram::LatticePoint;
using Points = std::vector<LatticePoint>;

// Every offset in a (2R+1)^2 box that satisfies the norm test written out by hand.
inline Points ball_offsets(double d, int norm /*0 euclid, 1 cheb, 2 manhattan*/) {
  Points out;
  const int reach = static_cast<int>(d) + 2;
  for (int i = -reach; i <= reach; ++i) {
    for (int j = -reach; j <= reach; ++j) {
      const double e = std::sqrt(double(i) * i + double(j) * j);
      const double c = std::max(std::abs(i), std::abs(j));
      const double m = std::abs(i) + std::abs(j);
      const double dist = norm == 0 ? e : norm == 1 ? c : m;
      if (dist <= d + 1e-12) out.push_back({i, j});
    }
  }
  return out;
}

struct AnnulusModel {
  std::vector<double> radii;
  std::vector<double> betas;

  double beta(LatticePoint p) const {
    const double r = std::sqrt(double(p.x1) * p.x1 + double(p.x2) * p.x2);
    for (std::size_t i = 0; i < radii.size(); ++i) {
      if (r < radii[i]) return betas[i];
    }
    return betas.back();
  }

  double theta(const Points& s) const {
    std::set<LatticePoint> uniq(s.begin(), s.end());
    double sum = 0.0;
    double min_beta = 2.0;
    for (const auto& p : uniq) {
      sum += beta(p);
      min_beta = std::min(min_beta, beta(p));
    }
    return 1.0 + sum - min_beta;
  }
};

inline Points shifted(const Points& offsets, LatticePoint x) {
  Points out;
  for (const auto& o : offsets) out.push_back({x.x1 + o.x1, x.x2 + o.x2});
  return out;
}

inline Points joined(Points a, const Points& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// Exact finite-level quantities for the annulus model, from
// P(max_S U <= u) = u^theta(S) and inclusion-exclusion.
struct FiniteLevel {
  double zeta = 0.0;  // conditioned ratio, per replicate conditioning on max_A U > u
  double zeta_star = 0.0;
  double p_condition = 0.0;      // P(max_A U > u)
  double osc_conditional = 0.0;  // E(#oscillations | max_A U > u)
  double osc_ratio = 0.0;        // sum_x P(osc_x) / P(max_A U > u)
};

inline FiniteLevel finite_level(const AnnulusModel& m, const Points& region, const Points& offsets, double u) {
  const double tA = m.theta(region);
  const double pA = std::pow(u, tA);  // P(max_A <= u)
  double osc = 0, osc_all = 0, pair_osc = 0, nbr = 0;
  for (const auto& x : region) {
    const Points v = shifted(offsets, x);
    const double tV = m.theta(v);
    const double tVA = m.theta(joined(v, region));
    // P(U(x) <= u < max_V, max_A > u)
    osc += u - std::pow(u, tV) - pA + std::pow(u, tVA);
    osc_all += u - std::pow(u, tV);
    for (const auto& o : offsets) {
      if (o.x1 == 0 && o.x2 == 0) continue;
      const LatticePoint y{x.x1 + o.x1, x.x2 + o.x2};
      const double tAy = m.theta(joined(region, {y}));
      const double tXY = m.theta({x, y});
      // P(U(y) > u, max_A > u)
      nbr += 1.0 - u - pA + std::pow(u, tAy);
      // P(U(x) <= u < U(y), max_A > u) = P(U(x)<=u<U(y)) - P(U(x)<=u<U(y), max_A<=u); the
      // second term vanishes unless y lies outside A.
      pair_osc += u - std::pow(u, tXY) - (pA - std::pow(u, tAy));
    }
  }
  FiniteLevel f;
  f.p_condition = 1.0 - pA;
  f.zeta = 1.0 - osc / nbr;
  f.zeta_star = 1.0 - pair_osc / nbr;
  f.osc_conditional = osc / f.p_condition;
  f.osc_ratio = osc_all / f.p_condition;
  return f;
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace oracle
