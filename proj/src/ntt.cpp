#include "ntt.hpp"

namespace gcs::ntt {

std::size_t fit_size(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m <<= 1;
  if (m > (std::size_t{1} << kMaxLog))
    fail(Errc::BudgetExceeded, "convolution size " + std::to_string(n) + " exceeds transform limit");
  return m;
}

void transform(std::vector<std::uint32_t>& a, bool invert) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; i++) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    std::uint32_t w = pow_mod(kG, (kP - 1) / len);
    if (invert) w = inv_mod(w);
    for (std::size_t i = 0; i < n; i += len) {
      std::uint64_t wn = 1;
      for (std::size_t k = 0; k < len / 2; k++) {
        std::uint32_t u = a[i + k];
        std::uint32_t v = static_cast<std::uint32_t>(wn * a[i + k + len / 2] % kP);
        a[i + k] = u + v < kP ? u + v : u + v - kP;
        a[i + k + len / 2] = u >= v ? u - v : u + kP - v;
        wn = wn * w % kP;
      }
    }
  }
  if (invert) {
    std::uint64_t ninv = inv_mod(static_cast<std::uint32_t>(n % kP));
    for (auto& x : a) x = static_cast<std::uint32_t>(x * ninv % kP);
  }
}

std::vector<std::uint32_t> convolve(const std::vector<std::uint32_t>& a,
                                    const std::vector<std::uint32_t>& b, std::size_t out_len) {
  if (a.empty() || b.empty()) return std::vector<std::uint32_t>(out_len, 0);
  const std::size_t full = a.size() + b.size() - 1;
  const std::size_t m = fit_size(full);
  std::vector<std::uint32_t> fa(m, 0), fb(m, 0);
  std::copy(a.begin(), a.end(), fa.begin());
  std::copy(b.begin(), b.end(), fb.begin());
  transform(fa, false);
  transform(fb, false);
  for (std::size_t i = 0; i < m; i++)
    fa[i] = static_cast<std::uint32_t>(std::uint64_t{fa[i]} * fb[i] % kP);
  transform(fa, true);
  fa.resize(out_len < full ? out_len : full);
  fa.resize(out_len, 0);
  return fa;
}

}  // namespace gcs::ntt
