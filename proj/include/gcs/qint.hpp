#pragma once
#include <cstdint>
#include <string>

#include "gcs/error.hpp"

namespace gcs {

// Gaussian integer re + im*i with 64-bit components. Correlation sums of
// quarter-phase sequences stay far below 2^63 for every length this library
// handles, so no overflow guard is needed on the hot paths.
struct GaussInt {
  std::int64_t re = 0;
  std::int64_t im = 0;

  constexpr GaussInt() = default;
  constexpr GaussInt(std::int64_t r, std::int64_t i) : re(r), im(i) {}

  friend constexpr GaussInt operator+(GaussInt a, GaussInt b) { return {a.re + b.re, a.im + b.im}; }
  friend constexpr GaussInt operator-(GaussInt a, GaussInt b) { return {a.re - b.re, a.im - b.im}; }
  friend constexpr GaussInt operator*(GaussInt a, GaussInt b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  constexpr GaussInt operator-() const { return {-re, -im}; }
  friend constexpr bool operator==(GaussInt a, GaussInt b) { return a.re == b.re && a.im == b.im; }
  friend constexpr bool operator!=(GaussInt a, GaussInt b) { return !(a == b); }

  constexpr GaussInt conj() const { return {re, -im}; }
  constexpr bool is_zero() const { return re == 0 && im == 0; }

  // true for 0, +/-1, +/-i: the only entry values sequences may carry
  constexpr bool is_quarter_phase() const {
    if (re == 0) return im == 0 || im == 1 || im == -1;
    return im == 0 && (re == 1 || re == -1);
  }

  // exact division by a rational integer; both components must divide evenly
  GaussInt divided_by(std::int64_t d) const {
    if (re % d != 0 || im % d != 0)
      fail(Errc::InvalidArgument, "gaussian value " + to_string() + " not divisible by " + std::to_string(d));
    return {re / d, im / d};
  }

  std::string to_string() const {
    if (im == 0) return std::to_string(re);
    if (re == 0) {
      if (im == 1) return "i";
      if (im == -1) return "-i";
      return std::to_string(im) + "i";
    }
    std::string s = std::to_string(re);
    s += (im > 0 ? "+" : "-");
    std::int64_t a = im > 0 ? im : -im;
    if (a != 1) s += std::to_string(a);
    s += "i";
    return s;
  }
};

constexpr GaussInt kOne{1, 0};
constexpr GaussInt kImag{0, 1};
constexpr GaussInt kZero{0, 0};

}  // namespace gcs
