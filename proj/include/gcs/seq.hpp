#pragma once
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gcs/qint.hpp"

namespace gcs {

// A sequence over {0, +1, -1, +i, -i}. Entries outside that alphabet are
// rejected at the API boundary (require_polyphase), not by the type itself,
// so intermediate integer arithmetic (quarter decompositions, correlation
// accumulators) can reuse the same container.
using QSeq = std::vector<GaussInt>;

bool is_polyphase(const QSeq& a);
void require_polyphase(const QSeq& a, const char* where);

// w(a) = sum a_i conj(a_i) = number of nonzero entries for polyphase input
std::int64_t weight(const QSeq& a);
bool is_zero_free(const QSeq& a);

QSeq neg(const QSeq& a);
QSeq conj(const QSeq& a);
// reverse then conjugate; correlation-invariant companion of a
QSeq flip_conj(const QSeq& a);
QSeq scalar_mul(GaussInt s, const QSeq& a);

QSeq zeros(std::size_t n);
QSeq cat(const QSeq& a, const QSeq& b);
// kron: result[i*|b|+j] = a[i]*b[j]
QSeq kron(const QSeq& a, const QSeq& b);
// element-wise sum; lengths must match
QSeq seq_add(const QSeq& a, const QSeq& b);
QSeq seq_sub(const QSeq& a, const QSeq& b);
// a0 b0 a1 b1 ...; |a| == |b| or |a| == |b|+1
QSeq interleave(const QSeq& a, const QSeq& b);
QSeq pad_to(const QSeq& a, std::size_t n);

// Aperiodic cross-correlation R_{ab}(tau) = sum_i a_i conj(b_{i-tau}) with
// out-of-range terms zero. Lags run over 1-n .. n-1 (n = max length); the
// returned vector stores lag tau at index tau + n - 1.
std::vector<GaussInt> corr_profile(const QSeq& a, const QSeq& b);
std::vector<GaussInt> acorr_profile(const QSeq& a);
GaussInt corr_at(const QSeq& a, const QSeq& b, std::int64_t tau);

// Periodic autocorrelation C_a(tau) = sum_i a_i conj(a_{(i-tau) mod n}),
// tau = 0..n-1.
std::vector<GaussInt> pcorr_profile(const QSeq& a);

struct VerifyOptions {
  // beyond this length a single autocorrelation switches from the direct
  // O(n^2) sum to exact number-theoretic convolution
  std::size_t direct_threshold = 4096;
  // total entry budget across the set; exceeding it raises BudgetExceeded
  std::size_t budget_entries = std::size_t{1} << 24;
  int jobs = 1;
};

struct VerifyReport {
  bool ok = false;
  std::int64_t weight_sum = 0;      // value at lag 0, = sum of member weights
  std::int64_t first_bad_lag = 0;   // valid when !ok
  GaussInt bad_value{0, 0};         // offending lag sum when !ok
  std::string describe() const;
};

// Checks that the right-zero-padded members have autocorrelations summing to
// weight_sum * delta. Entries must be quarter-phase. Exact integer arithmetic
// throughout (direct sums or NTT convolution, never floating point).
VerifyReport verify_gcs_set(const std::vector<QSeq>& seqs, const VerifyOptions& opt = {});

// convenience: throw VerificationFailed unless the report is ok
VerifyReport require_gcs_set(const std::vector<QSeq>& seqs, const char* what,
                             const VerifyOptions& opt = {});

// A certified complementary set. `lengths` keeps the per-member unpadded
// lengths (members of a CBS differ); `n` is the padded common length.
struct GcsSet {
  std::vector<QSeq> seqs;
  std::size_t n = 0;
  std::int64_t weight_sum = 0;
  bool certified = false;
  // complex-base-sequence metadata: members 0,1 have length cbs_s1 and
  // members 2,3 length cbs_s2
  bool is_cbs = false;
  std::uint64_t cbs_s1 = 0, cbs_s2 = 0;
  // CBS assembled from two independently certified pairs; unlocks unequal
  // multiplier lengths in the concatenation route
  bool pair_split = false;

  std::size_t cardinality() const { return seqs.size(); }
  std::vector<std::size_t> lengths() const;
};

GcsSet make_certified(std::vector<QSeq> seqs, const char* what, const VerifyOptions& opt = {});

}  // namespace gcs
