#pragma once
#include <cstdint>
#include <optional>
#include <vector>

#include "gcs/lengthset.hpp"

namespace gcs {

// Exponents of n = 2^(a+u) * 3^b3 * 5^c5 * 11^d11 * 13^e13 witnessing the
// quarter-phase pair length rule: b3+c5+d11+e13 <= a + 2u + 1 with u <= c5+e13.
// u counts the factors of 2 paired with a 5 or 13 into length-10/26 kernels.
struct GolayExponents {
  int a = 0;
  int u = 0;
  int b3 = 0, c5 = 0, d11 = 0, e13 = 0;
};

std::optional<GolayExponents> golay_membership(std::uint64_t n);

// Witness that n is a product of exactly k pair lengths (1 allowed as a
// factor). Exhaustive over smooth divisors; nullopt when impossible.
std::optional<std::vector<std::uint64_t>> golay_product_membership(std::uint64_t n, int k);

// all pair lengths in [1, N], sorted ascending; enumeration over smooth
// exponent tuples, no per-integer scan
std::vector<std::uint64_t> golay_numbers_upto(std::uint64_t n);

// S1 = {0} plus all pair lengths <= N, as a bit set
LengthSet enumerate_S1(std::uint64_t N);

// S_k = S1 * (S_{k-1} + S_{k-1}) restricted to [0, N]. With dense set, the
// k=2 stage is widened by the CBS-derived sets (E, F, S1*B, 2*S1*F) before
// the recursion continues.
LengthSet build_Sk(std::uint64_t N, int k, bool dense);

struct DenseSets {
  LengthSet B;  // odd CBS(b+1, b) half-lengths: 2b+1
  LengthSet E;  // zero-padded quad lengths
  LengthSet F;  // equal-length CBS lengths (products of two E members)
};

// restricted_B drops the literature base-sequence range {2b+1 | b <= 38}
// down to pair-derived values {2g+1 | g in S1} plus 15; used when no corpus
// is loaded.
DenseSets build_dense_sets(std::uint64_t N, bool restricted_B = false);

// same fixed-point construction but from an explicit set of odd base values
// (the construction planner feeds its own constructible catalog here)
DenseSets build_dense_sets_with(const LengthSet& B, std::uint64_t N);

// largest element of {2,10,26}*S1 not exceeding N_verified + 1
std::uint64_t choose_P(std::uint64_t N_verified);

struct BValue {
  std::uint64_t value = 0;
  bool restricted = false;   // computed without the base-sequence corpus
  bool hit_limit = false;    // no gap found up to the caller's limit
};

// Largest b <= limit such that every n in {1..b} has n*2^i representable as
// sum l_j m_j + sum (s_{2j-1}+s_{2j}) t_j with at most gamma/2 pair terms
// weighted 2 and CBS terms weighted 4 (2k + 4d <= gamma). corpus_loaded
// selects the full literature catalog versus the restricted one.
BValue compute_b_table(int gamma, int i, std::uint64_t limit, bool corpus_loaded);

// n = s*(t+u) with s,t,u pair lengths (u possibly 0); smallest witness in
// lexicographic (s, t, u) order with t >= u
struct S2Witness {
  std::uint64_t s = 0, t = 0, u = 0;
};
std::optional<S2Witness> s2_witness(std::uint64_t n, const LengthSet& s1);

// pair lengths >= 1 dividing n
std::vector<std::uint64_t> golay_divisors(std::uint64_t n,
                                          const std::vector<std::uint64_t>& golay_sorted);

}  // namespace gcs
