#pragma once
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gcs/golay.hpp"
#include "gcs/seq.hpp"

namespace gcs {

// Recipe tree for a built set. Kinds: seed, trivial, craigen, sumprod, qscale,
// yang, cbs_seed, cbs_from_pair, scale, hier. Unused fields stay at their
// defaults so structural equality doubles as serialization equality.
struct Plan {
  std::string kind;
  std::uint64_t expect_len = 0;
  std::uint64_t expect_card = 0;
  std::uint64_t length = 0;                     // seed
  std::uint64_t t = 0, u = 0;                   // sumprod grouping
  std::string seed_id;                          // craigen/qscale two-phase id, cbs_seed id
  std::string route;                            // yang: concat | interleave | combine
  std::uint64_t factor = 0;                     // scale: full factor, in {2,10,26}*S1
  std::uint64_t factor_base = 0, factor_g = 0;  // factor = base * g
  std::uint64_t P = 0;                          // hier
  std::vector<std::uint64_t> digit_vals;        // hier: nonzero digits, ascending power
  std::vector<std::uint64_t> digit_pows;
  std::uint64_t pad_sets = 0;                   // hier: empty-set padding count
  std::vector<Plan> children;

  bool operator==(const Plan&) const = default;
  std::size_t node_count() const;
};

// Recompute expected length/cardinality bottom-up; throws
// PlanArithmeticMismatch when a node's recorded values disagree.
void check_plan_arithmetic(const Plan& plan);

struct Built {
  GcsSet set;
  Plan plan;
};

// ---- primitive builders; outputs certified unless noted ----

GcsSet trivial_pair();
// verbatim pairs for lengths 1, 2, 3, 5, 10, 11, 13, 26
GcsSet seed_pair(std::uint64_t length);
bool is_two_phase(const GcsSet& set);

// pair composition via quarter sequences of a nontrivial 2-phase pair:
// output pair length s*t*u
GcsSet craigen_compose(const GcsSet& two_phase, const GcsSet& t_pair, const GcsSet& u_pair,
                       const VerifyOptions& opt = {});

// sum-product composition: setA of 2L members length s, setB of 2M members
// alternating lengths t, u (either may be 0, realized by empty sequences);
// output 2LM members of length s*(t+u)
GcsSet sum_product_compose(const GcsSet& setA, const GcsSet& setB, std::uint64_t t, std::uint64_t u,
                    const VerifyOptions& opt = {});

// multiplicative scaling: setA (2L, length s), setB (2M, equal length t),
// nontrivial 2-phase pair length v; output 2LM members of length s*t*v
GcsSet quarter_scale_compose(const GcsSet& setA, const GcsSet& setB, const GcsSet& two_phase,
                     const VerifyOptions& opt = {});

// {a|+1, a|-1, b, b} = CBS(g+1, g) from a pair {a, b} of length g
GcsSet cbs_from_pair(const GcsSet& pair, const VerifyOptions& opt = {});
// CBS(s1, s2) from two certified pairs; carries the pair-split certificate
GcsSet cbs_from_pairs(const GcsSet& pair_s1, const GcsSet& pair_s2, const VerifyOptions& opt = {});
// the verbatim CBS(8, 7) seed quad
GcsSet cbs_seed_87();

enum class YangRoute { kConcat, kInterleave };

// Zero-padded intermediate quad (a GCS quad of one common length with
// disjointly supported halves). Concat route consumes two multiplier pairs;
// unequal multiplier lengths require the CBS pair-split certificate.
// Interleave route requires CBS(s2+1, s2) and consumes no pairs.
GcsSet yang_compose(const GcsSet& cbs, const GcsSet* pair1, const GcsSet* pair2, YangRoute route,
                    const VerifyOptions& opt = {});
// Combine two intermediates of lengths m1, m2 into a certified CBS(m1*m2, m1*m2)
GcsSet yang_combine(const GcsSet& q1, const GcsSet& q2, const VerifyOptions& opt = {});

// Parse and verify a corpus of CBS(b+1, b) records. Failing records are
// reported in `rejects` ("record <idx>: reason") and skipped.
std::vector<GcsSet> load_base_corpus(const std::string& path,
                                     std::vector<std::string>* rejects = nullptr);

// ---- planner ----

struct BuildConfig {
  // digits are guaranteed coverable below this bound (used by choose_P)
  std::uint64_t verified_bound = 10000;
  std::uint64_t P_override = 0;  // 0: choose_P(verified_bound)
  std::string corpus_path;       // optional CBS(b+1, b) corpus
  VerifyOptions verify;
};

class Builder {
 public:
  explicit Builder(BuildConfig cfg = {});

  std::uint64_t P() const { return P_; }
  bool corpus_loaded() const { return !corpus_.empty(); }
  const std::vector<std::string>& corpus_rejects() const { return corpus_rejects_; }

  // cardinality-2 set; n must be a 4-phase pair length
  Built pair(std::uint64_t n);
  // cardinality-4 set of equal member length n
  Built quad(std::uint64_t n);
  // cardinality-8 set via n = g*(x+y)
  Built octet(std::uint64_t n);
  // smallest-cardinality set for a single length
  Built any_set(std::uint64_t n);
  // CBS(s1, s2): base-type (s1 = s2+1), pair-split, or equal-length route
  Built cbs(std::uint64_t s1, std::uint64_t s2);
  // base-P digit expansion, per-digit sets scaled by P^i and merged;
  // cardinality <= 2^(3 + ceil(log2 r))
  Built build_arbitrary(std::uint64_t n);

 private:
  void ensure_avail(std::uint64_t bound);

  std::optional<Built> try_pair(std::uint64_t n);
  std::optional<Built> try_quad(std::uint64_t n);
  std::optional<Built> try_octet(std::uint64_t n);
  std::optional<Built> try_cbs_for_b(std::uint64_t b);
  // intermediate quad of length e (the zero-padded Yang shapes)
  std::optional<Built> try_intermediate(std::uint64_t e);
  // equal CBS(f, f) via combining two intermediates
  std::optional<Built> try_cbs_ff(std::uint64_t f);
  Built scale_by_P(Built in, int times);

  BuildConfig cfg_;
  std::uint64_t P_ = 0;
  std::map<std::uint64_t, GcsSet> corpus_;
  std::vector<std::string> corpus_rejects_;

  std::uint64_t avail_bound_ = 0;
  LengthSet s1_, s2_plain_, s2d_avail_, g2_;
  DenseSets avail_;  // B/E/F over the constructible base values
  std::vector<std::uint64_t> golay_members_;
  std::map<std::uint64_t, Built> pair_cache_;
};

}  // namespace gcs
