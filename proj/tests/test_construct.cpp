// Composition operators against independent expansion oracles plus
// randomized planner coverage with full re-verification on a subsample.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gcs/construct.hpp"

using namespace gcs;

namespace {

const std::uint64_t kSeedLens[] = {1, 2, 3, 5, 10, 11, 13, 26};
const std::uint64_t kTwoPhaseLens[] = {2, 10, 26};

// independent entrywise expansion: stack copies of x scaled by entries of y,
// i.e. out[i*|x| + j] = y[i] * x[j]
QSeq stack_scaled(const QSeq& x, const QSeq& y) {
  QSeq out(x.size() * y.size(), kZero);
  for (std::size_t i = 0; i < y.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) out[i * x.size() + j] = y[i] * x[j];
  return out;
}

QSeq add(const QSeq& a, const QSeq& b) {
  REQUIRE(a.size() == b.size());
  QSeq out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

GcsSet empty_pair() {
  GcsSet e;
  e.seqs = {QSeq{}, QSeq{}};
  e.n = 0;
  e.certified = true;
  return e;
}

}  // namespace

TEST_CASE("seed pairs verify with the expected weights and phases") {
  for (std::uint64_t len : kSeedLens) {
    GcsSet p = seed_pair(len);
    CHECK(p.certified);
    CHECK(p.cardinality() == 2);
    CHECK(p.n == len);
    CHECK(p.weight_sum == std::int64_t(2 * len));
    CHECK(is_zero_free(p.seqs[0]));
    CHECK(is_zero_free(p.seqs[1]));
    bool two_phase = len == 1 || len == 2 || len == 10 || len == 26;
    CHECK(is_two_phase(p) == two_phase);
  }
  CHECK_THROWS_AS(seed_pair(4), Error);
  CHECK_THROWS_AS(seed_pair(7), Error);
}

TEST_CASE("pair products cover every seed triple") {
  for (std::uint64_t s : kTwoPhaseLens)
    for (std::uint64_t t : kSeedLens)
      for (std::uint64_t u : kSeedLens) {
        GcsSet out = craigen_compose(seed_pair(s), seed_pair(t), seed_pair(u));
        CAPTURE(s);
        CAPTURE(t);
        CAPTURE(u);
        CHECK(out.certified);
        CHECK(out.n == s * t * u);
        CHECK(out.weight_sum == std::int64_t(2 * s * t * u));
        CHECK(is_zero_free(out.seqs[0]));
        CHECK(is_zero_free(out.seqs[1]));
      }
  CHECK_THROWS_AS(craigen_compose(seed_pair(3), seed_pair(2), seed_pair(2)), Error);
  CHECK_THROWS_AS(craigen_compose(trivial_pair(), seed_pair(2), seed_pair(2)), Error);
}

TEST_CASE("sum-product composition matches the direct expansion") {
  std::mt19937_64 rng(50101);
  Builder builder;
  for (int it = 0; it < 40; ++it) {
    // A: a seed pair or a small quad; B: two pairs interleaved as (t, u, t, u)
    GcsSet A = rng() % 2 ? seed_pair(kSeedLens[rng() % 8]) : builder.quad(15).set;
    std::uint64_t t = kSeedLens[rng() % 8];
    std::uint64_t u = rng() % 3 == 0 ? 0 : kSeedLens[rng() % 8];
    GcsSet tp = seed_pair(t);
    GcsSet up = u == 0 ? empty_pair() : seed_pair(u);
    GcsSet B;
    B.seqs = {tp.seqs[0], up.seqs[0], tp.seqs[1], up.seqs[1]};
    B.n = std::max<std::size_t>(t, u);
    B.certified = true;

    GcsSet out = sum_product_compose(A, B, t, u);
    const std::size_t L = A.cardinality() / 2, M = 2, s = A.seqs[0].size();
    CHECK(out.certified);
    CHECK(out.cardinality() == 2 * L * M);
    CHECK(out.n == s * (t + u));

    // oracle: zero-pad the B halves against each other, then expand the
    // four-term block formula entry by entry
    std::vector<QSeq> bp(2 * M);
    for (std::size_t m = 0; m < M; ++m) {
      bp[2 * m] = cat(B.seqs[2 * m], zeros(u));
      bp[2 * m + 1] = cat(zeros(t), B.seqs[2 * m + 1]);
    }
    std::size_t at = 0;
    for (std::size_t l = 0; l < L; ++l)
      for (std::size_t m = 0; m < M; ++m) {
        QSeq c = add(stack_scaled(A.seqs[2 * l], bp[2 * m]),
                     stack_scaled(A.seqs[2 * l + 1], bp[2 * m + 1]));
        QSeq d = add(stack_scaled(flip_conj(A.seqs[2 * l + 1]), bp[2 * m]),
                     neg(stack_scaled(flip_conj(A.seqs[2 * l]), bp[2 * m + 1])));
        CHECK(out.seqs[at++] == c);
        CHECK(out.seqs[at++] == d);
      }
  }
  // declared grouping must match the member lengths
  GcsSet B;
  GcsSet tp = seed_pair(3);
  B.seqs = {tp.seqs[0], tp.seqs[1]};
  B.n = 3;
  B.certified = true;
  CHECK_THROWS_AS(sum_product_compose(seed_pair(2), B, 3, 1), Error);
}

TEST_CASE("two-phase scaling composes sets multiplicatively") {
  Builder builder;
  GcsSet quad15 = builder.quad(15).set;
  for (std::uint64_t v : kTwoPhaseLens) {
    for (std::uint64_t s : {3ull, 5ull}) {
      GcsSet out = quarter_scale_compose(seed_pair(s), quad15, seed_pair(v));
      CHECK(out.certified);
      CHECK(out.cardinality() == 4);
      CHECK(out.n == s * 15 * v);
      // the quarter sequences of the scaling pair jointly carry weight v/2
      // but each input member is reused against both quarters, so density
      // carries through from the scaled set
      CHECK(out.weight_sum == quad15.weight_sum * std::int64_t(s * v));
    }
  }
  CHECK_THROWS_AS(quarter_scale_compose(seed_pair(3), quad15, seed_pair(5)), Error);
}

TEST_CASE("complex base quads from pairs and the verbatim seed") {
  for (std::uint64_t g : kSeedLens) {
    GcsSet c = cbs_from_pair(seed_pair(g));
    CHECK(c.certified);
    CHECK(c.is_cbs);
    CHECK(c.cbs_s1 == g + 1);
    CHECK(c.cbs_s2 == g);
    CHECK(c.weight_sum == std::int64_t(2 * (g + 1) + 2 * g));
  }
  GcsSet c87 = cbs_seed_87();
  CHECK(c87.certified);
  CHECK(c87.cbs_s1 == 8);
  CHECK(c87.cbs_s2 == 7);
  CHECK(c87.weight_sum == 30);

  GcsSet split = cbs_from_pairs(seed_pair(3), seed_pair(2));
  CHECK(split.certified);
  CHECK(split.pair_split);
  CHECK(split.cbs_s1 == 3);
  CHECK(split.cbs_s2 == 2);

  GcsSet degenerate = cbs_from_pairs(seed_pair(3), empty_pair());
  CHECK(degenerate.certified);
  CHECK(degenerate.cbs_s1 == 3);
  CHECK(degenerate.cbs_s2 == 0);
}

TEST_CASE("zero-padded intermediates and their pairwise combination") {
  GcsSet c32 = cbs_from_pair(seed_pair(2));  // CBS(3, 2)
  GcsSet inter = yang_compose(c32, nullptr, nullptr, YangRoute::kInterleave);
  CHECK(inter.certified);
  CHECK(inter.n == 5);
  // halves occupy disjoint index parities
  for (std::size_t i = 0; i < 5; ++i) {
    if (i % 2 == 1) {
      CHECK(inter.seqs[0][i].is_zero());
      CHECK(inter.seqs[2][i].is_zero());
    } else {
      CHECK(inter.seqs[1][i].is_zero());
      CHECK(inter.seqs[3][i].is_zero());
    }
  }

  GcsSet c87 = cbs_seed_87();
  GcsSet p2a = seed_pair(2), p2b = seed_pair(2);
  GcsSet conc = yang_compose(c87, &p2a, &p2b, YangRoute::kConcat);
  CHECK(conc.certified);
  CHECK(conc.n == 2 * (8 * 2 + 7 * 2));

  // unequal multipliers demand the pair-split certificate
  GcsSet p3 = seed_pair(3), p2 = seed_pair(2);
  CHECK_THROWS_AS(yang_compose(c87, &p3, &p2, YangRoute::kConcat), Error);
  GcsSet split = cbs_from_pairs(seed_pair(3), seed_pair(2));
  GcsSet ok = yang_compose(split, &p3, &p2, YangRoute::kConcat);
  CHECK(ok.certified);
  CHECK(ok.n == 2 * (3 * 3 + 2 * 2));

  GcsSet comb = yang_combine(inter, inter);
  CHECK(comb.certified);
  CHECK(comb.is_cbs);
  CHECK(comb.cbs_s1 == 25);
  CHECK(comb.cbs_s2 == 25);
  CHECK(comb.n == 25);
}

TEST_CASE("planner pairs cover random pair lengths with checked plans") {
  std::mt19937_64 rng(50102);
  Builder builder;
  LengthSet s1 = enumerate_S1(10000);
  auto members = s1.members(1);
  for (int it = 0; it < 50; ++it) {
    std::uint64_t n = members[rng() % members.size()];
    Built b = builder.pair(n);
    CAPTURE(n);
    CHECK(b.set.certified);
    CHECK(b.set.cardinality() == 2);
    CHECK(b.set.n == n);
    CHECK(b.plan.expect_len == n);
    CHECK_NOTHROW(check_plan_arithmetic(b.plan));
  }
  CHECK_THROWS_AS(builder.pair(7), Error);
  CHECK_THROWS_AS(builder.pair(127), Error);
}

TEST_CASE("planner quads cover random two-level lengths") {
  std::mt19937_64 rng(50103);
  Builder builder;
  LengthSet s1 = enumerate_S1(20000);
  LengthSet s2 = build_Sk(20000, 2, false);
  std::vector<std::uint64_t> members;
  for (std::uint64_t n = 1; n <= 20000; ++n)
    if (s2.test(n)) members.push_back(n);
  for (int it = 0; it < 50; ++it) {
    std::uint64_t n = members[rng() % members.size()];
    Built b = builder.quad(n);
    CAPTURE(n);
    CHECK(b.set.certified);
    CHECK(b.set.cardinality() == 4);
    CHECK(b.set.n == n);
    CHECK_NOTHROW(check_plan_arithmetic(b.plan));
  }
  Built b87 = builder.quad(87);
  CHECK(b87.set.certified);
  CHECK(b87.set.weight_sum == 348);
}

TEST_CASE("any_set picks the smallest cardinality and octets close the gaps") {
  std::mt19937_64 rng(50104);
  Builder builder;
  LengthSet s3 = build_Sk(100000, 3, false);
  std::vector<std::uint64_t> members;
  for (std::uint64_t n = 1; n <= 100000 && members.size() < 4000; ++n)
    if (s3.test(n)) members.push_back(n);
  for (int it = 0; it < 50; ++it) {
    std::uint64_t n = members[rng() % members.size()];
    Built b = builder.any_set(n);
    CAPTURE(n);
    CHECK((b.set.cardinality() == 2 || b.set.cardinality() == 4 || b.set.cardinality() == 8));
    CHECK(b.set.n == n);
    CHECK(b.set.certified);
    CHECK_NOTHROW(check_plan_arithmetic(b.plan));
  }
}

TEST_CASE("equal-shape complex base quads from combined intermediates") {
  Builder builder;
  for (std::uint64_t f : {9ull, 25ull, 81ull, 225ull}) {
    Built b = builder.cbs(f, f);
    CAPTURE(f);
    CHECK(b.set.certified);
    CHECK(b.set.is_cbs);
    CHECK(b.set.cbs_s1 == f);
    CHECK(b.set.cbs_s2 == f);
    CHECK_NOTHROW(check_plan_arithmetic(b.plan));
  }
  Built base = builder.cbs(8, 7);
  CHECK(base.set.certified);
  Built splitc = builder.cbs(3, 2);
  CHECK(splitc.set.certified);
  Built degen = builder.cbs(3, 0);
  CHECK(degen.set.certified);
  CHECK(degen.set.cbs_s2 == 0);
}

TEST_CASE("arbitrary lengths build with bounded cardinality and checked plans") {
  std::mt19937_64 rng(50105);
  BuildConfig cfg;
  cfg.verify.budget_entries = std::size_t{1} << 18;  // force deferral on the big ones
  Builder builder(cfg);
  const std::uint64_t P = builder.P();
  for (int it = 0; it < 150; ++it) {
    std::uint64_t n = 1 + rng() % 300000;
    Built b = builder.build_arbitrary(n);
    CAPTURE(n);
    CHECK(b.set.n == n);
    CHECK(b.plan.expect_len == n);
    CHECK(b.plan.expect_card == b.set.cardinality());
    CHECK_NOTHROW(check_plan_arithmetic(b.plan));
    // cardinality <= 2^(3 + ceil(log2 r)) for r nonzero base-P digits
    std::uint64_t r = 0;
    for (std::uint64_t rest = n; rest; rest /= P)
      if (rest % P) ++r;
    std::uint64_t eta = 1;
    while (eta < r) eta <<= 1;
    CHECK(b.set.cardinality() <= 8 * eta);
    // members stay inside the alphabet even when verification was deferred
    for (const auto& s : b.set.seqs) CHECK(is_polyphase(s));
  }
  // full verification on a small-length subsample
  int done = 0;
  while (done < 30) {
    std::uint64_t n = 1 + rng() % 20000;
    Built b = builder.build_arbitrary(n);
    VerifyReport rep = verify_gcs_set(b.set.seqs);
    CAPTURE(n);
    CHECK(rep.ok);
    CHECK(rep.weight_sum == b.set.weight_sum);
    ++done;
  }
}

TEST_CASE("scaled digits reuse the smallest two-phase base") {
  // force a two-digit expansion with a tiny P to exercise the scale chain
  BuildConfig cfg;
  cfg.P_override = 100;
  Builder builder(cfg);
  for (std::uint64_t n : {101ull, 1234ull, 9999ull, 10001ull}) {
    Built b = builder.build_arbitrary(n);
    CAPTURE(n);
    CHECK(b.set.n == n);
    CHECK_NOTHROW(check_plan_arithmetic(b.plan));
    VerifyReport rep = verify_gcs_set(b.set.seqs);
    CHECK(rep.ok);
  }
}
