#include <doctest.h>

#include <cmath>
#include <random>

#include <crossinggram/errors.hpp>
#include <crossinggram/model.hpp>

#include "oracles.hpp"

using namespace crossinggram;

namespace {

PartitionModel demo() { return PartitionModel::annuli({12, 34}, {0.8, 0.6, 0.1}); }

struct RandomInstance {
  oracle::AnnulusModel reference;
  PartitionModel model;
  Region region;
};

RandomInstance random_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> cells(1, 4);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int k = cells(rng);
  std::vector<double> radii;
  double r = 0;
  for (int i = 0; i + 1 < k; ++i) radii.push_back(r += 1.0 + 6.0 * unit(rng));
  std::vector<double> betas;
  for (int i = 0; i < k; ++i) betas.push_back(unit(rng) < 0.1 ? 1.0 : 0.01 + 0.99 * unit(rng));

  std::uniform_int_distribution<int> coord(-20, 20);
  std::vector<LatticePoint> pts;
  const LatticePoint c{coord(rng), coord(rng)};
  switch (rng() % 3) {
    case 0:
      for (const auto& p : make_disk(1.0 + 4.0 * unit(rng), c)) pts.push_back(p);
      break;
    case 1:
      for (const auto& p : make_square(static_cast<std::int64_t>(rng() % 4), c)) pts.push_back(p);
      break;
    default:
      for (int i = 0, m = 1 + static_cast<int>(rng() % 12); i < m; ++i) {
        pts.push_back({c.x1 + coord(rng) / 4, c.x2 + coord(rng) / 4});
      }
  }
  return {oracle::AnnulusModel{radii, betas}, PartitionModel::annuli(radii, betas), Region(pts)};
}

}  // namespace

TEST_CASE("beta_at follows the annulus partition") {
  const auto m = demo();
  CHECK(m.beta_at({0, 0}) == 0.8);
  CHECK(m.beta_at({20, 0}) == 0.6);
  CHECK(m.beta_at({40, 0}) == 0.1);
  CHECK(m.beta_at({11, 4}) == 0.8);  // 137 < 144
  CHECK(m.beta_at({11, 5}) == 0.6);  // 146 >= 144
  CHECK(m.beta_at({12, 0}) == 0.6);  // boundary belongs to the outer cell
  CHECK(m.beta_at({34, 0}) == 0.1);
  CHECK(m.beta_at({-1000000, 7}) == 0.1);
}

TEST_CASE("model construction rejects bad parameters") {
  CHECK_THROWS_AS(PartitionModel::annuli({12, 34}, {0.8, 0.6}), ConfigError);
  CHECK_THROWS_AS(PartitionModel::annuli({34, 12}, {0.8, 0.6, 0.1}), ConfigError);
  CHECK_THROWS_AS(PartitionModel::annuli({12}, {0.0, 0.5}), ConfigError);
  CHECK_THROWS_AS(PartitionModel::annuli({12}, {1.2, 0.5}), ConfigError);
  CHECK_THROWS_AS(PartitionModel(std::vector<PartitionModel::Cell>{{{}, 0.5}, {{}, 0.5}}), ConfigError);
}

TEST_CASE("theta_exact examples") {
  const auto m = demo();
  CHECK(theta_exact(m, neighborhood({0, 0}, 1)) == doctest::Approx(4.2).epsilon(1e-14));
  CHECK(theta_exact(m, Region{{20, 0}, {21, 0}}) == doctest::Approx(1.6).epsilon(1e-14));
  CHECK(theta_exact(m, Region{{20, 0}, {40, 0}}) == doctest::Approx(1.6).epsilon(1e-14));
  CHECK(theta_exact(m, Region{{5, 5}}) == 1.0);
}

TEST_CASE("pair coefficients") {
  const auto m = demo();
  CHECK(theta_pair_exact(m, {0, 0}, {1, 0}) == doctest::Approx(1.8));
  CHECK(theta_pair_exact(m, {0, 0}, {40, 0}) == doctest::Approx(1.8));
  CHECK(theta_pair_exact(m, {40, 0}, {41, 0}) == doctest::Approx(1.1));
  CHECK(lambda_pair_exact(m, {40, 0}, {41, 0}) == doctest::Approx(0.9));
  CHECK(lambda_pair_exact(m, {0, 0}, {1, 0}) == doctest::Approx(0.2));
  CHECK(lambda_pair_exact(PartitionModel::constant(1.0), {0, 0}, {1, 0}) == 0.0);
  CHECK_THROWS_AS(theta_pair_exact(m, {1, 1}, {1, 1}), ConfigError);
  CHECK_THROWS_AS(lambda_pair_exact(m, {1, 1}, {1, 1}), ConfigError);

  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    auto inst = random_instance(rng);
    const auto& r = inst.region;
    if (r.size() < 2) continue;
    CHECK(theta_pair_exact(inst.model, r[0], r[1]) == doctest::Approx(theta_exact(inst.model, Region{r[0], r[1]})));
  }
}

TEST_CASE("lambda_conditional and gamma") {
  const auto m = demo();
  const Region v = neighborhood({0, 0}, 1);
  CHECK(lambda_conditional_exact(m, Region{{0, 0}}, v) == doctest::Approx(1.0 / 4.2));
  CHECK(lambda_conditional_exact(m, v, v) == 1.0);
  // Constant beta = 0.5: theta(V) = 3, theta of k sites = k / 2 + 1 / 2.
  const auto c = PartitionModel::constant(0.5);
  const Region four = Region{{0, 0}, {0, 1}, {0, 2}, {0, 3}};
  const Region eleven = Region{{0, 0}, {0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}, {0, 6}, {0, 7}, {0, 8}, {0, 9}, {0, 10}};
  CHECK(theta_exact(c, four) == doctest::Approx(2.5));
  CHECK(lambda_conditional_exact(c, Region{{0, 0}}, four) == doctest::Approx(0.4));
  CHECK(theta_exact(c, eleven) == doctest::Approx(6.0));
  CHECK(lambda_conditional_exact(c, neighborhood({0, 0}, 1), eleven) == doctest::Approx(0.5));

  CHECK(gamma_exact(m, Region{{20, 0}, {21, 0}}) == doctest::Approx(0.6));
  CHECK(gamma_exact(PartitionModel::constant(1.0), make_square(2)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(gamma_exact(m, Region{{0, 0}}), ConfigError);
}

TEST_CASE("zeta_exact reproduces single-cell values") {
  const auto m = demo();
  const Region cell1 = make_disk(10);
  const Region cell3 = make_square(3, {50, 0});
  REQUIRE(dilate(cell1, 1).size() > cell1.size());
  CHECK(std::abs(zeta_exact(m, cell1) - 0.2) < 1e-12);
  CHECK(std::abs(zeta_exact(m, cell3) - 0.9) < 1e-12);
  CHECK(std::abs(zeta_exact(m, make_square(2, {23, 0})) - 0.4) < 1e-12);
  CHECK(zeta_exact(PartitionModel::constant(1.0), make_disk(6)) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(std::abs(zeta_star_exact(m, cell3) - 0.9) < 1e-12);
  CHECK(std::abs(zeta_star_exact(PartitionModel::constant(1.0), cell3)) < 1e-15);

  // Straddling cells 1 and 2: zeta* <= zeta, both strictly between 0.2 and 0.4.
  const Region straddle = make_square(2, {12, 0});
  const double z = zeta_exact(m, straddle);
  const double zs = zeta_star_exact(m, straddle);
  CHECK(zs <= z + 1e-12);
  CHECK(z > 0.2);
  CHECK(z < 0.4);
}

TEST_CASE("zeta_exact under other norms and radii") {
  const auto m = demo();
  const Region a = make_square(2, {50, 0});
  // |V| - 1 neighbours each carry beta = 0.1 inside a single cell.
  CHECK(std::abs(zeta_exact(m, a, 1, NormKind::chebyshev) - 0.9) < 1e-12);
  CHECK(std::abs(zeta_exact(m, a, 2, NormKind::euclidean) - 0.9) < 1e-12);
  CHECK_THROWS_AS(zeta_exact(m, a, 0.5), NumericalError);
}

TEST_CASE("joint law and exponent function") {
  const auto m = demo();
  const LatticePoint a{0, 0}, b{20, 0};
  const double one = 1.0;
  CHECK(joint_cdf_exact(m, std::span(&a, 1), std::span(&one, 1)) == doctest::Approx(std::exp(-1.0)));
  const std::vector<LatticePoint> pair{a, b};
  const std::vector<double> ones{1.0, 1.0};
  CHECK(joint_cdf_exact(m, pair, ones) == doctest::Approx(0.16529888822158653));
  CHECK(exponent_function_exact(m, pair, ones) == doctest::Approx(1.8));
  const std::vector<double> huge{1e300, std::numeric_limits<double>::infinity()};
  CHECK(joint_cdf_exact(m, pair, huge) == doctest::Approx(1.0));
  for (double z : {0.1, 0.5, 2.0, 17.0})
    CHECK(exponent_function_exact(m, std::span(&a, 1), std::span(&z, 1)) == doctest::Approx(1.0 / z));

  const auto v = neighborhood({0, 0}, 1);
  const std::vector<double> five(5, 1.0);
  CHECK(exponent_function_exact(m, v.points(), five) == doctest::Approx(theta_exact(m, v)).epsilon(1e-14));

  const std::vector<double> bad{1.0, 0.0};
  CHECK_THROWS_AS(joint_cdf_exact(m, pair, bad), ConfigError);
  const std::vector<LatticePoint> dup{a, a};
  CHECK_THROWS_AS(joint_cdf_exact(m, dup, ones), ConfigError);
  CHECK_THROWS_AS(joint_cdf_exact(m, pair, five), ConfigError);
}

TEST_CASE("exact coefficients agree with hand-written oracle (randomised)") {
  std::mt19937_64 rng(11);
  const auto offsets = oracle::ball_offsets(1.0, 0);
  for (int t = 0; t < 300; ++t) {
    const auto inst = random_instance(rng);
    const std::vector<LatticePoint> pts(inst.region.begin(), inst.region.end());
    CHECK(theta_exact(inst.model, inst.region) == doctest::Approx(inst.reference.theta(pts)).epsilon(1e-12));

    double num = 0.0;
    for (const auto& x : pts) num += inst.reference.theta(oracle::shifted(offsets, x)) - 1.0;
    const double z = 1.0 - num / (4.0 * pts.size());
    CHECK(zeta_exact(inst.model, inst.region) == doctest::Approx(z).epsilon(1e-12));
  }
}

TEST_CASE("property suite over randomised models and regions") {
  std::mt19937_64 rng(2024);
  std::size_t instances = 0;
  for (int t = 0; t < 250; ++t) {
    const auto inst = random_instance(rng);
    const auto& m = inst.model;
    const auto& a = inst.region;
    ++instances;

    const double th = theta_exact(m, a);
    CHECK(th >= 1.0);
    CHECK(th <= static_cast<double>(a.size()) + 1e-12);
    if (a.size() > 1) CHECK(th > 1.0);

    // Inclusion monotonicity: grow A by its dilation.
    CHECK(theta_exact(m, dilate(a, 1)) >= th - 1e-12);
    CHECK(theta_exact(m, Region{a[0]}) <= th + 1e-12);

    const double z = zeta_exact(m, a);
    const double zs = zeta_star_exact(m, a);
    CHECK(z >= 0.0);
    CHECK(z <= 1.0);
    CHECK(zs <= z + 1e-12);
    CHECK(zs >= -1e-12);

    // Tail-dependence algebra: sum lambda(V|A) - sum lambda(x|A) = sum (theta(V) - 1) / theta(A),
    // and zeta = 1 - sum (theta(V) - 1) / (v_sum - |A|).
    double lam_v = 0.0, lam_x = 0.0, excess = 0.0;
    for (const auto& x : a) {
      const auto v = neighborhood(x, 1);
      lam_v += lambda_conditional_exact(m, v, a);
      lam_x += lambda_conditional_exact(m, Region{x}, a);
      excess += theta_exact(m, v) - 1.0;
    }
    CHECK(lam_v - lam_x == doctest::Approx(excess / th).epsilon(1e-12));
    CHECK(z == doctest::Approx(1.0 - excess / static_cast<double>(v_sum(a, 1) - a.size())).epsilon(1e-12));

    // Lowering any beta never lowers zeta.
    for (std::size_t c = 0; c < m.cell_count(); ++c) {
      const double lowered = m.cell_beta(c) * 0.5;
      CHECK(zeta_exact(m.with_beta(c, lowered), a) >= z - 1e-12);
    }
  }
  CHECK(instances >= 100);
}

TEST_CASE("exact_summary bundles the coefficients") {
  const auto m = demo();
  const Region a = make_square(2, {50, 0});
  const auto s = exact_summary(m, a);
  CHECK(s.zeta.value == doctest::Approx(0.9));
  CHECK(s.zeta_star.value == doctest::Approx(0.9));
  REQUIRE(s.gamma);
  CHECK(*s.gamma == doctest::Approx((s.theta_region - 1.0) / 24.0));
  CHECK(s.zeta.per_site.size() == a.size());
  CHECK(s.zeta.per_site[0].value == doctest::Approx(1.4));
  CHECK(s.zeta.method == Method::exact);
}

TEST_CASE("summation is insensitive to iteration order") {
  // Rebuild the same region from a shuffled point list; the stored order is
  // canonical so values are bit-identical, and a naive reversed sum agrees to 1e-12.
  const auto m = demo();
  const Region disk = make_disk(30);
  auto pts = std::vector<LatticePoint>(disk.begin(), disk.end());
  std::shuffle(pts.begin(), pts.end(), std::mt19937_64(5));
  const Region shuffled(pts);
  CHECK(zeta_exact(m, shuffled) == zeta_exact(m, disk));
  double naive = 0.0;
  for (auto it = pts.rbegin(); it != pts.rend(); ++it) naive += theta_exact(m, neighborhood(*it, 1));
  const double v = 5.0 * pts.size();
  CHECK(std::abs((v - naive) / (v - pts.size()) - zeta_exact(m, shuffled)) < 1e-12);
}
