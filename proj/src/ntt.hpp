#pragma once
#include <cstdint>
#include <vector>

#include "gcs/error.hpp"

namespace gcs::ntt {

// Number-theoretic transform mod p = 5 * 2^25 + 1. Supports power-of-two
// sizes up to 2^25, enough for exact convolutions at the 10^7 desk bound.
// All convolution users keep their true coefficients well inside (-p/2, p/2)
// (correlation sums are bounded by total entry budget 2^24, subset-sum
// supports by the bound itself), so residues identify exact values.
inline constexpr std::uint32_t kP = 167772161;
inline constexpr std::uint32_t kG = 3;
inline constexpr std::size_t kMaxLog = 25;

inline std::uint32_t pow_mod(std::uint32_t b, std::uint64_t e) {
  std::uint64_t r = 1, x = b;
  while (e) {
    if (e & 1) r = r * x % kP;
    x = x * x % kP;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(r);
}

inline std::uint32_t inv_mod(std::uint32_t a) { return pow_mod(a, kP - 2); }

// in-place transform; `invert` applies the inverse including the 1/n factor
void transform(std::vector<std::uint32_t>& a, bool invert);

// smallest power of two >= n (n <= 2^25)
std::size_t fit_size(std::size_t n);

// exact linear convolution of centered residues; result truncated to out_len
std::vector<std::uint32_t> convolve(const std::vector<std::uint32_t>& a,
                                    const std::vector<std::uint32_t>& b, std::size_t out_len);

// centered lift of residue r into (-p/2, p/2]
inline std::int64_t centered(std::uint32_t r) {
  return r > kP / 2 ? static_cast<std::int64_t>(r) - kP : static_cast<std::int64_t>(r);
}

inline std::uint32_t residue(std::int64_t v) {
  std::int64_t m = v % static_cast<std::int64_t>(kP);
  if (m < 0) m += kP;
  return static_cast<std::uint32_t>(m);
}

}  // namespace gcs::ntt
