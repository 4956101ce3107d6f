#pragma once

#include <array>
#include <cstdint>

namespace noma {

__extension__ using uint128_t = unsigned __int128;

/// Philox4x64-10 counter-based generator (Salmon et al., Random123).
/// Stateless: every (key, counter) maps to four independent 64-bit words,
/// so any trial's stream can be produced directly from its index.
class Philox4x64 {
 public:
  using Counter = std::array<std::uint64_t, 4>;
  using Key = std::array<std::uint64_t, 2>;

  static constexpr const char* kName = "philox4x64-10";

  explicit Philox4x64(Key key) noexcept : key_(key) {}
  explicit Philox4x64(std::uint64_t seed) noexcept : key_{seed, 0} {}

  Counter operator()(Counter ctr) const noexcept {
    Key k = key_;
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        k[0] += kWeyl0;
        k[1] += kWeyl1;
      }
      ctr = single_round(ctr, k);
    }
    return ctr;
  }

  const Key& key() const noexcept { return key_; }

  /// Maps 64 random bits to a double in the open interval (0, 1).
  static double to_open_unit(std::uint64_t bits) noexcept {
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
  }

 private:
  static constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
  static constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
  static constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

  static Counter single_round(const Counter& c, const Key& k) noexcept {
    const uint128_t p0 = static_cast<uint128_t>(kMul0) * c[0];
    const uint128_t p1 = static_cast<uint128_t>(kMul1) * c[2];
    const auto hi0 = static_cast<std::uint64_t>(p0 >> 64);
    const auto lo0 = static_cast<std::uint64_t>(p0);
    const auto hi1 = static_cast<std::uint64_t>(p1 >> 64);
    const auto lo1 = static_cast<std::uint64_t>(p1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }

  Key key_;
};

}  // namespace noma
