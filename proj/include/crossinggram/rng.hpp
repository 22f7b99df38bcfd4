#pragma once

#include <array>
#include <cstdint>

namespace crossinggram {

// Philox4x32-10 (Salmon et al., SC'11): a counter-based generator. Each
// (key, counter) pair maps to four independent 32-bit words, so any draw can
// be produced without touching shared state.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter block(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

// Stream tags for the counter's last word.
enum class Stream : std::uint32_t { site = 0, common = 1 };

// Uniform variate in the open interval (0, 1) addressed by
// (seed, replicate, site, stream). 53 random bits, offset by half an ulp.
inline double uniform_open(std::uint64_t seed, std::uint32_t replicate, std::int64_t x1, std::int64_t x2,
                           Stream stream) noexcept {
  const Philox4x32::Counter ctr{replicate, static_cast<std::uint32_t>(x1), static_cast<std::uint32_t>(x2),
                                static_cast<std::uint32_t>(stream)};
  const Philox4x32::Key key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  const auto out = Philox4x32::block(ctr, key);
  const std::uint64_t bits = (std::uint64_t{out[0]} << 32 | out[1]) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

inline constexpr const char* kGeneratorName = "philox4x32-10/v1";

}  // namespace crossinggram
