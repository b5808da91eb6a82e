#pragma once
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "gcs/construct.hpp"
#include "gcs/seq.hpp"

namespace gcs {

// Signed permutation of order v (a power of two): column c maps to
// sign[c] * e_image[c]. Stored as arrays, never as a dense matrix.
struct SignedPerm {
  std::uint32_t v = 0;
  std::vector<std::uint32_t> image;
  std::vector<std::int8_t> sign;

  bool operator==(const SignedPerm&) const = default;
};

SignedPerm sp_identity(std::uint32_t v);
bool sp_valid(const SignedPerm& x);
SignedPerm sp_mul(const SignedPerm& x, const SignedPerm& y);
SignedPerm sp_neg(const SignedPerm& x);
SignedPerm sp_transpose(const SignedPerm& x);
// unit complex scalar as an order-2 signed permutation
SignedPerm rep2(GaussInt z);
// block-diagonal doubling diag(x, x)
SignedPerm sp_embed(const SignedPerm& x);
SignedPerm sp_embed_to(SignedPerm x, std::uint32_t v);
SignedPerm sp_block_diag(const SignedPerm& a, const SignedPerm& b);
// [[0, tr], [bl, 0]] with square blocks of order tr.v
SignedPerm sp_anti_diag(const SignedPerm& tr, const SignedPerm& bl);

// Sequence over {0} ∪ SP_v; absent optionals are zero entries.
struct SPSeq {
  std::uint32_t v = 0;
  std::vector<std::optional<SignedPerm>> entries;

  std::size_t size() const { return entries.size(); }
  bool quasi_symmetric() const;
};

// complex polyphase sequence as an SPSeq over SP_2
SPSeq to_sp2(const QSeq& s);

// Lag-indexed v x v integer matrices; aperiodic profiles cover lags
// lag_min .. lag_min + count - 1, periodic profiles cover 0 .. n-1.
struct MatProfile {
  std::uint32_t v = 0;
  std::int64_t lag_min = 0;
  std::vector<std::vector<std::int64_t>> mats;  // row-major v*v each

  const std::vector<std::int64_t>& at(std::int64_t lag) const;
  bool is_zero(std::int64_t lag) const;
  bool is_scaled_identity(std::int64_t lag, std::int64_t scale) const;
};

enum class CorrMode { kAperiodic, kPeriodic };

// sum_i a_i * transpose(b_{i-tau}), index shifted cyclically in periodic mode
MatProfile spseq_corr(const SPSeq& a, const SPSeq& b, CorrMode mode);

SPSeq flip_transpose(const SPSeq& a);

// Disjoint quasi-symmetric merge into order 2v; validates disjoint support,
// quasi-symmetry, flip-transpose correlation symmetry of both inputs and
// entrywise commutation before assembling the block entries.
SPSeq sp_combine(const SPSeq& a, const SPSeq& b);

// ---- periodic complementary generator ----

struct SupPairItem {
  GcsSet ef;  // certified pair, length l
  GcsSet gh;  // certified pair, length m
};

struct SupCbsItem {
  GcsSet cbs;        // certified CBS(s1, s2)
  GcsSet mult1;      // certified pair, length t
  GcsSet mult2;      // certified pair, same length t
};

struct SupRows {
  std::uint64_t n = 0;
  std::vector<std::uint64_t> lambda;          // k + 2d + 1 cumulative offsets
  std::vector<std::pair<QSeq, QSeq>> seqs;    // k + 2d (a_i, b_i) rows
};

// zero-padded quasi-symmetric rows of common length n = 4*sum(l*m) +
// 4*sum((s1+s2)*t); jointly supplementary and periodic-complementary to n*delta
SupRows supplementary_rows(const std::vector<SupPairItem>& pairs,
                          const std::vector<SupCbsItem>& cbs_items);

// first lag where the periodic profile differs from n * identity * delta
std::optional<std::uint64_t> imperfection_lag(const SPSeq& c);

// fold the 2(k+2d) rows through sp_combine in row order; output is a
// zero-free perfect sequence over SP_(2^(2k+4d))
SPSeq perfect_from_inputs(const SupRows& rows);

}  // namespace gcs
