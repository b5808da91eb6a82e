#pragma once
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gcs/construct.hpp"
#include "gcs/signed_perm.hpp"

namespace gcs {

// Sign matrix, one bit per entry: +1 stored as 0, -1 as 1.
struct PMMatrix {
  std::uint64_t order = 0;
  std::uint64_t block = 0;  // block size tag for block-circulant builds, 0 = none
  std::vector<std::uint64_t> bits;

  std::size_t words_per_row() const { return (order + 63) / 64; }
  bool neg(std::uint64_t r, std::uint64_t c) const {
    return (bits[r * words_per_row() + c / 64] >> (c % 64)) & 1;
  }
  void set_neg(std::uint64_t r, std::uint64_t c) {
    bits[r * words_per_row() + c / 64] |= std::uint64_t{1} << (c % 64);
  }
  int sign(std::uint64_t r, std::uint64_t c) const { return neg(r, c) ? -1 : 1; }

  bool operator==(const PMMatrix&) const = default;
};

PMMatrix make_pm(std::uint64_t order);

struct HadVerifyOptions {
  std::uint64_t full_threshold = 4096;  // largest order fully multiplied out by default
  bool force_full = false;
  int jobs = 1;
};

struct HadReport {
  bool ok = false;
  std::string mode;  // "full" | "structure"
  std::uint64_t row_a = 0, row_b = 0;  // failing pair when !ok
  std::string describe() const;
};

// order 2^t by repeated [[H, H], [H, -H]] doubling from [1]
PMMatrix sylvester(unsigned t);
// one doubling step [[H, H], [H, -H]] of an arbitrary sign matrix
PMMatrix sylvester_double(const PMMatrix& h);

// exact HH^T check; block-tagged matrices above the full threshold use the
// circulant shortcut (shift structure + first block row against all rows)
HadReport verify_hadamard(const PMMatrix& h, const HadVerifyOptions& opt = {});

// order-8n array from a certified equal-length 4-phase quad: circulant
// blocks with back-identity reversal and unit substitution into 2x2 signs
PMMatrix goethals_seidel_8n(const GcsSet& quad, const HadVerifyOptions& opt = {});

// order v*n from a perfect SPSeq over SP_v and a Hadamard seed of order v:
// H = D (I_n ⊗ H_v) with D the block-circulant of the sequence
PMMatrix block_circulant_from_perfect(const SPSeq& c, const PMMatrix& h_v,
                                      const HadVerifyOptions& opt = {});

// ---- asymptotic planner ----

struct DigitPlan {
  std::uint64_t value = 0;
  unsigned power = 0;  // base-P position
  int gamma = 0;       // doubling budget for this digit
  int shift = 0;       // scale exponent consumed from the threshold table
  std::uint64_t threshold = 0;
  bool trusted = false;   // threshold taken from the reference table, not recomputed
  bool executed = false;  // a concrete small-scale decomposition was found
  std::vector<std::array<std::uint64_t, 2>> pair_shapes;  // (l, m) products
  std::vector<std::array<std::uint64_t, 3>> cbs_shapes;   // (s1, s2, t) terms
};

struct AsymptoticPlan {
  std::uint64_t m = 0;
  int t = 0;  // target order is 2^t * m
  std::uint64_t P = 0;
  int gamma_total = 0;
  int pad_doublings = 0;
  std::vector<DigitPlan> digits;
};

// Base-2^40 digit plan for odd m; digit witnesses are searched concretely in
// the executable regime (single digit, v*n <= 2^16) and otherwise certified
// against the trusted thresholds.
AsymptoticPlan asymptotic_plan(std::uint64_t m);
// digit arithmetic, t formula and executed-shape sums; throws PlanArithmeticMismatch
void check_asymptotic_plan(const AsymptoticPlan& plan);
// realize an executable single-digit plan end to end (sequences, perfect
// fold, block circulant, Sylvester padding); requires plan.digits[0].executed
PMMatrix execute_asymptotic_plan(const AsymptoticPlan& plan, Builder& builder,
                                 const HadVerifyOptions& opt = {});

}  // namespace gcs
