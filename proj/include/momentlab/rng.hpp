#pragma once

#include <array>
#include <cstdint>

namespace momentlab {

// Philox4x32-10 (Salmon et al., SC'11). Stateless: output depends only on
// (key, counter), so any entry of any replicate can be drawn in any order.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit Philox4x32(std::uint64_t seed)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

  Counter operator()(Counter ctr) const {
    Key k = key_;
    for (int round = 0; round < 10; ++round) {
      if (round) {
        k[0] += 0x9E3779B9u;
        k[1] += 0xBB67AE85u;
      }
      std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
      std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ k[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ k[1], static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }

 private:
  Key key_;
};

// Uniform double in (0,1) from the top 52 of 64 random bits; both ends stay representable.
inline double open_unit(std::uint32_t hi, std::uint32_t lo) {
  std::uint64_t x = (std::uint64_t{hi} << 32 | lo) >> 12;
  return (static_cast<double>(x) + 0.5) * 0x1.0p-52;
}

}  // namespace momentlab
