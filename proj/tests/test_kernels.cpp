#include <doctest.h>

#include <cstring>
#include <random>
#include <vector>

#include <crossinggram/kernels.hpp>

using namespace crossinggram::kernels;

namespace {

// Lengths straddling every vector width and tail case.
constexpr std::size_t kLengths[] = {0, 1, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 33, 100, 1023, 4096};

std::vector<const KernelTable*> variants() {
  std::vector<const KernelTable*> v{&scalar_kernels()};
  if (const auto* avx2 = avx2_kernels()) v.push_back(avx2);
  return v;
}

}  // namespace

TEST_CASE("dispatch reports a usable table") {
  const auto& k = active_kernels();
  CHECK(k.max_rank_sum != nullptr);
  MESSAGE("active kernels: " << k.name << (avx2_kernels() ? " (avx2 available)" : " (avx2 unavailable)"));
}

TEST_CASE("max_rank_sum variants agree with the reference") {
  std::mt19937_64 rng(1);
  for (std::size_t n : kLengths) {
    for (std::size_t k : {1u, 2u, 5u, 9u}) {
      std::vector<std::vector<std::uint32_t>> cols(k, std::vector<std::uint32_t>(n));
      for (auto& c : cols) {
        for (auto& v : c) v = static_cast<std::uint32_t>(rng());  // full 32-bit range, exercises unsigned max
      }
      std::vector<const std::uint32_t*> ptrs;
      for (auto& c : cols) ptrs.push_back(c.data());
      std::uint64_t expect = 0;
      for (std::size_t j = 0; j < n; ++j) {
        std::uint32_t m = 0;
        for (auto& c : cols) m = std::max(m, c[j]);
        expect += m;
      }
      for (const auto* t : variants()) {
        CAPTURE(t->name);
        CHECK(t->max_rank_sum(ptrs.data(), k, n) == expect);
      }
    }
  }
}

TEST_CASE("exceed_mask variants agree bit for bit") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t n : kLengths) {
    std::vector<double> s(n);
    for (auto& v : s) v = unit(rng);
    if (n > 2) s[1] = 0.75;  // equality is not an exceedance
    std::vector<std::uint8_t> ref(n), got(n);
    scalar_kernels().exceed_mask(s.data(), n, 0.75, ref.data());
    for (std::size_t j = 0; j < n; ++j) CHECK(ref[j] == (s[j] > 0.75));
    for (const auto* t : variants()) {
      std::fill(got.begin(), got.end(), 7);
      t->exceed_mask(s.data(), n, 0.75, got.data());
      CHECK(got == ref);
    }
  }
}

TEST_CASE("accumulate_site variants agree bit for bit") {
  std::mt19937_64 rng(3);
  for (std::size_t n : kLengths) {
    for (std::size_t k : {0u, 1u, 4u, 8u}) {
      std::vector<std::uint8_t> self(n);
      std::vector<std::vector<std::uint8_t>> nb(k, std::vector<std::uint8_t>(n));
      for (auto& v : self) v = rng() % 3 == 0;
      for (auto& c : nb) {
        for (auto& v : c) v = rng() % 4 == 0;
      }
      std::vector<const std::uint8_t*> ptrs;
      for (auto& c : nb) ptrs.push_back(c.data());

      struct Buffers {
        std::vector<std::uint8_t> any;
        std::vector<std::uint32_t> c;
        LevelAccumulators acc(std::size_t n) {
          return {any.data(), c.data(), c.data() + n, c.data() + 2 * n, c.data() + 3 * n, c.data() + 4 * n};
        }
      };
      auto fresh = [&] {
        Buffers b{std::vector<std::uint8_t>(n), std::vector<std::uint32_t>(5 * n)};
        for (std::size_t j = 0; j < n; ++j) {
          b.any[j] = rng() % 2;
          for (int q = 0; q < 5; ++q) b.c[q * n + j] = static_cast<std::uint32_t>(rng() % 50);
        }
        return b;
      };
      const Buffers start = fresh();

      // Reference by definition.
      Buffers ref = start;
      for (std::size_t j = 0; j < n; ++j) {
        std::uint32_t cnt = 0;
        for (auto& c : nb) cnt += c[j];
        const bool s = self[j];
        ref.any[j] = ref.any[j] || s;
        ref.c[j] += (!s && cnt > 0);
        ref.c[n + j] += (s || cnt > 0);
        ref.c[2 * n + j] += s;
        ref.c[3 * n + j] += cnt;
        ref.c[4 * n + j] += s ? 0 : cnt;
      }
      for (const auto* t : variants()) {
        CAPTURE(t->name);
        Buffers b = start;
        t->accumulate_site(self.data(), ptrs.data(), k, n, b.acc(n));
        CHECK(b.any == ref.any);
        CHECK(b.c == ref.c);
      }
    }
  }
}

TEST_CASE("max_stable_combine variants agree bit for bit") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unit(1e-6, 1.0);
  for (std::size_t n : kLengths) {
    std::vector<double> y(n), r(n);
    for (std::size_t j = 0; j < n; ++j) {
      y[j] = -1.0 / std::log(unit(rng));
      r[j] = -1.0 / std::log(unit(rng));
    }
    for (double beta : {1.0, 0.8, 0.5, 0.1, 1e-3}) {
      std::vector<double> ref(n), got(n);
      for (std::size_t j = 0; j < n; ++j) ref[j] = std::max(y[j] * beta, r[j] * (1.0 - beta));
      for (const auto* t : variants()) {
        t->max_stable_combine(y.data(), r.data(), beta, n, got.data());
        CHECK(std::memcmp(got.data(), ref.data(), n * sizeof(double)) == 0);
      }
    }
  }
}
