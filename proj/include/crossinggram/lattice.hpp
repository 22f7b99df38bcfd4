#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace crossinggram {

// A site of Z^2. Coordinates are stored in 64 bits so that neighbourhood
// offsets never overflow for inputs with |coordinate| <= 2^31 - 1.
struct LatticePoint {
  std::int64_t x1 = 0;
  std::int64_t x2 = 0;

  friend constexpr auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
  friend constexpr LatticePoint operator+(LatticePoint a, LatticePoint b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
  friend constexpr LatticePoint operator-(LatticePoint a, LatticePoint b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
};

// Squared Euclidean norm, exact for coordinates up to 2^32 in magnitude.
long double squared_norm(LatticePoint p);

std::string to_string(LatticePoint p);

enum class NormKind { euclidean, chebyshev, manhattan };

std::string_view to_string(NormKind norm);
NormKind parse_norm(std::string_view name);

// Finite nonempty set of lattice points, kept sorted lexicographically by
// (x1, x2) without duplicates. Every downstream sum iterates in this order.
class Region {
 public:
  explicit Region(std::vector<LatticePoint> points);
  Region(std::initializer_list<LatticePoint> points);

  std::size_t size() const noexcept { return points_.size(); }
  std::span<const LatticePoint> points() const noexcept { return points_; }
  auto begin() const noexcept { return points_.begin(); }
  auto end() const noexcept { return points_.end(); }
  const LatticePoint& operator[](std::size_t i) const { return points_[i]; }

  bool contains(LatticePoint p) const;
  std::optional<std::size_t> index_of(LatticePoint p) const;
  bool is_subset_of(const Region& other) const;

  friend bool operator==(const Region&, const Region&) = default;

 private:
  std::vector<LatticePoint> points_;
};

// Offsets y - x of V_d(x) around the origin, lexicographically ordered.
std::vector<LatticePoint> stencil(double d, NormKind norm);

bool within(LatticePoint offset, double d, NormKind norm);

Region neighborhood(LatticePoint x, double d, NormKind norm = NormKind::euclidean);

// |V_d(x)|; independent of x.
std::size_t neighborhood_size(double d, NormKind norm = NormKind::euclidean);

Region dilate(const Region& a, double d, NormKind norm = NormKind::euclidean);

// Sum over x in A of |V_d(x)|, with V_d(x) taken over all of Z^2.
std::int64_t v_sum(const Region& a, double d, NormKind norm = NormKind::euclidean);

// Closed disk { p : |p - center|^2 <= r^2 }.
Region make_disk(double r, LatticePoint center = {});

// Half-open annulus { p : r_lo^2 <= |p - center|^2 < r_hi^2 }.
Region make_annulus(double r_lo, double r_hi, LatticePoint center = {});

// (2h + 1) x (2h + 1) block centred at center.
Region make_square(std::int64_t half_width, LatticePoint center = {});

Region unite(const Region& a, const Region& b);

// Points of a that also lie in b; nullopt when the intersection is empty.
std::optional<Region> intersect(const Region& a, const Region& b);

}  // namespace crossinggram
