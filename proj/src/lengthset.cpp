#include "gcs/lengthset.hpp"

#include <atomic>
#include <bit>
#include <cstdlib>
#include <string>

#include "ntt.hpp"

namespace gcs {

namespace {

std::size_t read_cap() {
  if (const char* env = std::getenv("GCS_MEMORY_LIMIT")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::size_t{2} << 30;
}

}  // namespace

std::size_t memory_cap() {
  static const std::size_t cap = read_cap();
  return cap;
}

void charge_memory(std::size_t bytes, const char* what) {
  if (bytes > memory_cap())
    fail(Errc::BudgetExceeded, std::string(what) + ": " + std::to_string(bytes) +
                                   " bytes exceed memory cap " + std::to_string(memory_cap()));
}

LengthSet::LengthSet(std::uint64_t bound) : bound_(bound) {
  const std::size_t nw = static_cast<std::size_t>(bound / 64 + 1);
  charge_memory(nw * 8, "LengthSet");
  words_.assign(nw, 0);
}

std::uint64_t LengthSet::count(std::uint64_t lo) const {
  if (words_.empty()) return 0;
  std::uint64_t c = 0;
  const std::size_t w0 = static_cast<std::size_t>(lo >> 6);
  for (std::size_t w = w0; w < words_.size(); w++) {
    std::uint64_t x = words_[w];
    if (w == w0) x &= ~std::uint64_t{0} << (lo & 63);
    c += static_cast<std::uint64_t>(std::popcount(x));
  }
  return c;
}

std::uint64_t LengthSet::count_upto(std::uint64_t hi) const {
  if (words_.empty()) return 0;
  if (hi > bound_) hi = bound_;
  std::uint64_t c = 0;
  const std::size_t wend = static_cast<std::size_t>(hi >> 6);
  for (std::size_t w = 0; w < wend; w++) c += static_cast<std::uint64_t>(std::popcount(words_[w]));
  std::uint64_t last = words_[wend];
  const unsigned keep = static_cast<unsigned>(hi & 63);
  last &= keep == 63 ? ~std::uint64_t{0} : ((std::uint64_t{1} << (keep + 1)) - 1);
  c += static_cast<std::uint64_t>(std::popcount(last));
  return c - (test(0) ? 1 : 0);
}

std::vector<std::uint64_t> LengthSet::members(std::uint64_t lo) const {
  std::vector<std::uint64_t> out;
  for (std::size_t w = lo >> 6; w < words_.size(); w++) {
    std::uint64_t x = words_[w];
    if (w == (lo >> 6)) x &= ~std::uint64_t{0} << (lo & 63);
    while (x) {
      const int b = std::countr_zero(x);
      out.push_back((static_cast<std::uint64_t>(w) << 6) + static_cast<std::uint64_t>(b));
      x &= x - 1;
    }
  }
  return out;
}

std::optional<std::uint64_t> LengthSet::first_gap(std::uint64_t from) const {
  for (std::uint64_t v = from; v <= bound_; ) {
    std::uint64_t w = ~words_[v >> 6];
    w &= ~std::uint64_t{0} << (v & 63);
    if (w) {
      const std::uint64_t cand = (v & ~std::uint64_t{63}) +
                                 static_cast<std::uint64_t>(std::countr_zero(w));
      if (cand <= bound_) return cand;
      return std::nullopt;
    }
    v = (v | 63) + 1;
  }
  return std::nullopt;
}

std::optional<std::uint64_t> LengthSet::max_member() const {
  for (std::size_t w = words_.size(); w-- > 0;) {
    if (words_[w]) {
      const int b = 63 - std::countl_zero(words_[w]);
      return (static_cast<std::uint64_t>(w) << 6) + static_cast<std::uint64_t>(b);
    }
  }
  return std::nullopt;
}

void LengthSet::or_with(const LengthSet& other) {
  const std::size_t nw = std::min(words_.size(), other.words_.size());
  for (std::size_t w = 0; w < nw; w++) words_[w] |= other.words_[w];
  // mask off bits beyond our own bound that a longer word tail cannot carry
  if (!words_.empty()) {
    const unsigned keep = static_cast<unsigned>(bound_ & 63);
    if (keep != 63) words_.back() &= (std::uint64_t{1} << (keep + 1)) - 1;
  }
}

namespace {

// out |= a << shift, truncated to out's bound
void shifted_or(LengthSet& out, const LengthSet& a, std::uint64_t shift) {
  auto& ow = out.words();
  const auto& aw = a.words();
  const std::size_t word_shift = static_cast<std::size_t>(shift >> 6);
  const unsigned bit_shift = static_cast<unsigned>(shift & 63);
  if (word_shift >= ow.size()) return;
  const std::size_t n = ow.size() - word_shift;
  if (bit_shift == 0) {
    for (std::size_t i = 0; i < n && i < aw.size(); i++) ow[i + word_shift] |= aw[i];
  } else {
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < n && i <= aw.size(); i++) {
      const std::uint64_t cur = i < aw.size() ? aw[i] : 0;
      ow[i + word_shift] |= (cur << bit_shift) | carry;
      carry = cur >> (64 - bit_shift);
    }
  }
  const unsigned keep = static_cast<unsigned>(out.bound() & 63);
  if (keep != 63) ow.back() &= (std::uint64_t{1} << (keep + 1)) - 1;
}

LengthSet sum_by_shifts(const LengthSet& small, const LengthSet& large, std::uint64_t bound) {
  LengthSet out(bound);
  for (std::uint64_t x : small.members()) {
    if (x > bound) break;
    shifted_or(out, large, x);
  }
  return out;
}

LengthSet sum_by_ntt(const LengthSet& a, const LengthSet& b, std::uint64_t bound) {
  const std::size_t la = static_cast<std::size_t>(std::min(a.bound(), bound)) + 1;
  const std::size_t lb = static_cast<std::size_t>(std::min(b.bound(), bound)) + 1;
  charge_memory((la + lb + 3 * ntt::fit_size(la + lb)) * 4, "sum_set ntt");
  std::vector<std::uint32_t> ia(la, 0), ib(lb, 0);
  for (std::uint64_t v = 0; v < la; v++) ia[v] = a.test(v) ? 1 : 0;
  for (std::uint64_t v = 0; v < lb; v++) ib[v] = b.test(v) ? 1 : 0;
  auto conv = ntt::convolve(ia, ib, static_cast<std::size_t>(bound) + 1);
  LengthSet out(bound);
  for (std::uint64_t v = 0; v < conv.size(); v++)
    if (conv[v]) out.set(v);
  return out;
}

}  // namespace

LengthSet sum_set(const LengthSet& a, const LengthSet& b, std::uint64_t bound) {
  const std::uint64_t ca = a.count(), cb = b.count();
  const LengthSet& small = ca <= cb ? a : b;
  const LengthSet& large = ca <= cb ? b : a;
  const std::uint64_t words = bound / 64 + 1;
  const std::uint64_t shift_cost = std::min(ca, cb) * words;
  // roughly 3 transforms of size m, ~2 word-ops worth of work per element
  const std::uint64_t m = 2 * (bound + 1);
  std::uint64_t ntt_cost = 0;
  if (m <= (std::uint64_t{1} << ntt::kMaxLog)) {
    std::uint64_t logm = 1;
    while ((std::uint64_t{1} << logm) < m) logm++;
    ntt_cost = 3 * m * logm / 8;
  } else {
    ntt_cost = ~std::uint64_t{0};
  }
  if (shift_cost <= ntt_cost) return sum_by_shifts(small, large, bound);
  return sum_by_ntt(a, b, bound);
}

LengthSet product_set(const std::vector<std::uint64_t>& a_members, const LengthSet& b,
                      std::uint64_t bound) {
  LengthSet out(bound);
  const auto bm = b.members(1);
  for (std::uint64_t x : a_members) {
    if (x == 0) continue;
    if (x > bound) break;
    const std::uint64_t cap = bound / x;
    for (std::uint64_t y : bm) {
      if (y > cap) break;
      out.set(x * y);
    }
  }
  return out;
}

LengthSet product_set(const LengthSet& a, const LengthSet& b, std::uint64_t bound) {
  // drive by the sparser factor list
  if (a.count(1) <= b.count(1)) return product_set(a.members(1), b, bound);
  return product_set(b.members(1), a, bound);
}

LengthSet square_set(const LengthSet& a, std::uint64_t bound) {
  LengthSet out(bound);
  const auto am = a.members(1);
  for (std::size_t i = 0; i < am.size(); i++) {
    const std::uint64_t x = am[i];
    if (x * x > bound) break;
    const std::uint64_t cap = bound / x;
    for (std::size_t j = i; j < am.size(); j++) {
      if (am[j] > cap) break;
      out.set(x * am[j]);
    }
  }
  return out;
}

LengthSet scale_set(const LengthSet& a, std::uint64_t k, std::uint64_t bound) {
  LengthSet out(bound);
  if (k == 0) {
    if (a.count() > 0) out.set(0);
    return out;
  }
  for (std::uint64_t x : a.members()) {
    if (x > bound / k) break;
    out.set(x * k);
  }
  return out;
}

LengthSet even_part(const LengthSet& a) {
  LengthSet out = a;
  for (auto& w : out.words()) w &= 0x5555555555555555ull;
  return out;
}

}  // namespace gcs
