#pragma once
#include <cstdint>
#include <optional>
#include <vector>

#include "gcs/error.hpp"

namespace gcs {

// Memory budget shared by the set builders and other large allocators.
// Default 2 GiB; override via the GCS_MEMORY_LIMIT environment variable
// (bytes). Charged allocations raise BudgetExceeded when the cap is hit.
std::size_t memory_cap();
void charge_memory(std::size_t bytes, const char* what);

// Subset of [0, bound] stored as packed 64-bit words. Value 0 is an ordinary
// member (several builders track it: the degenerate length belongs to S1).
class LengthSet {
 public:
  LengthSet() = default;
  explicit LengthSet(std::uint64_t bound);

  std::uint64_t bound() const { return bound_; }
  bool test(std::uint64_t v) const {
    return v <= bound_ && (words_[v >> 6] >> (v & 63)) & 1;
  }
  void set(std::uint64_t v) {
    if (v <= bound_) words_[v >> 6] |= std::uint64_t{1} << (v & 63);
  }
  void clear(std::uint64_t v) {
    if (v <= bound_) words_[v >> 6] &= ~(std::uint64_t{1} << (v & 63));
  }

  std::uint64_t count(std::uint64_t lo = 0) const;           // members in [lo, bound]
  std::uint64_t count_upto(std::uint64_t hi) const;          // members in [1, hi]
  std::vector<std::uint64_t> members(std::uint64_t lo = 0) const;
  // first value >= from absent from the set, or nullopt when [from, bound]
  // is fully covered
  std::optional<std::uint64_t> first_gap(std::uint64_t from = 1) const;
  std::optional<std::uint64_t> max_member() const;

  void or_with(const LengthSet& other);
  bool operator==(const LengthSet& other) const = default;

  const std::vector<std::uint64_t>& words() const { return words_; }
  std::vector<std::uint64_t>& words() { return words_; }

 private:
  std::uint64_t bound_ = 0;
  std::vector<std::uint64_t> words_;
};

// {x + y | x in a, y in b} clipped to bound. Chooses between member-driven
// shifted-OR and exact NTT support convolution by cost; both are exact, so
// the result does not depend on the choice.
LengthSet sum_set(const LengthSet& a, const LengthSet& b, std::uint64_t bound);
// {x * y | x in a, y in b, x >= 1, y >= 1} clipped to bound
LengthSet product_set(const LengthSet& a, const LengthSet& b, std::uint64_t bound);
LengthSet product_set(const std::vector<std::uint64_t>& a_members, const LengthSet& b,
                      std::uint64_t bound);
// {x * y | x, y in a, both >= 1}
LengthSet square_set(const LengthSet& a, std::uint64_t bound);
// {k * x | x in a}
LengthSet scale_set(const LengthSet& a, std::uint64_t k, std::uint64_t bound);
// copy with odd values removed
LengthSet even_part(const LengthSet& a);

}  // namespace gcs
