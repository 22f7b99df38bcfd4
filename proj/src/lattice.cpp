#include <crossinggram/lattice.hpp>

#include <algorithm>
#include <cmath>
#include <iterator>

#include <crossinggram/errors.hpp>

namespace crossinggram {

long double squared_norm(LatticePoint p) {
  const auto a = static_cast<long double>(p.x1);
  const auto b = static_cast<long double>(p.x2);
  return a * a + b * b;
}

std::string to_string(LatticePoint p) { return "(" + std::to_string(p.x1) + "," + std::to_string(p.x2) + ")"; }

std::string_view to_string(NormKind norm) {
  switch (norm) {
    case NormKind::euclidean: return "euclidean";
    case NormKind::chebyshev: return "chebyshev";
    case NormKind::manhattan: return "manhattan";
  }
  return "euclidean";
}

NormKind parse_norm(std::string_view name) {
  if (name == "euclidean") return NormKind::euclidean;
  if (name == "chebyshev") return NormKind::chebyshev;
  if (name == "manhattan") return NormKind::manhattan;
  throw ConfigError("unknown norm '" + std::string(name) + "' (expected euclidean|chebyshev|manhattan)");
}

Region::Region(std::vector<LatticePoint> points) : points_(std::move(points)) {
  std::sort(points_.begin(), points_.end());
  points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
  if (points_.empty()) throw ConfigError("region must contain at least one point");
}

Region::Region(std::initializer_list<LatticePoint> points) : Region(std::vector<LatticePoint>(points)) {}

bool Region::contains(LatticePoint p) const { return std::binary_search(points_.begin(), points_.end(), p); }

std::optional<std::size_t> Region::index_of(LatticePoint p) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), p);
  if (it == points_.end() || *it != p) return std::nullopt;
  return static_cast<std::size_t>(it - points_.begin());
}

bool Region::is_subset_of(const Region& other) const {
  return std::includes(other.points_.begin(), other.points_.end(), points_.begin(), points_.end());
}

namespace {

void check_radius(double d) {
  if (!(d > 0.0) || !std::isfinite(d)) throw ConfigError("neighbourhood radius d must be a positive finite number");
}

}  // namespace

bool within(LatticePoint offset, double d, NormKind norm) {
  const auto a = std::abs(static_cast<long double>(offset.x1));
  const auto b = std::abs(static_cast<long double>(offset.x2));
  const auto r = static_cast<long double>(d);
  switch (norm) {
    case NormKind::euclidean: return a * a + b * b <= r * r;
    case NormKind::chebyshev: return std::max(a, b) <= r;
    case NormKind::manhattan: return a + b <= r;
  }
  return false;
}

std::vector<LatticePoint> stencil(double d, NormKind norm) {
  check_radius(d);
  const auto reach = static_cast<std::int64_t>(std::floor(d));
  std::vector<LatticePoint> offsets;
  for (std::int64_t i = -reach; i <= reach; ++i) {
    for (std::int64_t j = -reach; j <= reach; ++j) {
      if (within({i, j}, d, norm)) offsets.push_back({i, j});
    }
  }
  return offsets;
}

Region neighborhood(LatticePoint x, double d, NormKind norm) {
  auto offsets = stencil(d, norm);
  for (auto& o : offsets) o = o + x;
  return Region(std::move(offsets));
}

std::size_t neighborhood_size(double d, NormKind norm) { return stencil(d, norm).size(); }

Region dilate(const Region& a, double d, NormKind norm) {
  const auto offsets = stencil(d, norm);
  std::vector<LatticePoint> out;
  out.reserve(a.size() * offsets.size());
  for (const auto& x : a) {
    for (const auto& o : offsets) out.push_back(x + o);
  }
  return Region(std::move(out));
}

std::int64_t v_sum(const Region& a, double d, NormKind norm) {
  return static_cast<std::int64_t>(a.size()) * static_cast<std::int64_t>(neighborhood_size(d, norm));
}

Region make_disk(double r, LatticePoint center) {
  if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("disk radius must be a positive finite number");
  const auto reach = static_cast<std::int64_t>(std::floor(r));
  const auto r2 = static_cast<long double>(r) * r;
  std::vector<LatticePoint> pts;
  for (std::int64_t i = -reach; i <= reach; ++i) {
    for (std::int64_t j = -reach; j <= reach; ++j) {
      if (squared_norm({i, j}) <= r2) pts.push_back(center + LatticePoint{i, j});
    }
  }
  return Region(std::move(pts));
}

Region make_annulus(double r_lo, double r_hi, LatticePoint center) {
  if (!(r_lo >= 0.0) || !std::isfinite(r_hi) || !(r_lo < r_hi)) {
    throw ConfigError("annulus requires 0 <= r_lo < r_hi < infinity");
  }
  const auto reach = static_cast<std::int64_t>(std::ceil(r_hi));
  const auto lo2 = static_cast<long double>(r_lo) * r_lo;
  const auto hi2 = static_cast<long double>(r_hi) * r_hi;
  std::vector<LatticePoint> pts;
  for (std::int64_t i = -reach; i <= reach; ++i) {
    for (std::int64_t j = -reach; j <= reach; ++j) {
      const auto s = squared_norm({i, j});
      if (lo2 <= s && s < hi2) pts.push_back(center + LatticePoint{i, j});
    }
  }
  if (pts.empty()) throw ConfigError("annulus contains no lattice points");
  return Region(std::move(pts));
}

Region make_square(std::int64_t half_width, LatticePoint center) {
  if (half_width < 0) throw ConfigError("square half-width must be nonnegative");
  std::vector<LatticePoint> pts;
  for (std::int64_t i = -half_width; i <= half_width; ++i) {
    for (std::int64_t j = -half_width; j <= half_width; ++j) pts.push_back(center + LatticePoint{i, j});
  }
  return Region(std::move(pts));
}

Region unite(const Region& a, const Region& b) {
  std::vector<LatticePoint> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return Region(std::move(out));
}

std::optional<Region> intersect(const Region& a, const Region& b) {
  std::vector<LatticePoint> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  if (out.empty()) return std::nullopt;
  return Region(std::move(out));
}

}  // namespace crossinggram
