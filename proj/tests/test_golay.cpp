// Length-set machinery against per-integer oracles: trial-division membership,
// divisor-scan product witnesses, and set-algebra cross-checks.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gcs/golay.hpp"

using namespace gcs;

namespace {

// Trial-division oracle for the pair-length rule: n = 2^A 3^b 5^c 11^d 13^e
// smooth, and b+c+d+e <= (A-u) + 2u + 1 for some u <= min(A, c+e). The right
// side grows with u, so u = min(A, c+e) decides.
bool member_oracle(std::uint64_t n) {
  if (n == 0) return false;
  int A = 0, b = 0, c = 0, d = 0, e = 0;
  while (n % 2 == 0) n /= 2, ++A;
  while (n % 3 == 0) n /= 3, ++b;
  while (n % 5 == 0) n /= 5, ++c;
  while (n % 11 == 0) n /= 11, ++d;
  while (n % 13 == 0) n /= 13, ++e;
  if (n != 1) return false;
  int u = std::min(A, c + e);
  return b + c + d + e <= A + u + 1;
}

}  // namespace

TEST_CASE("membership agrees with the trial-division oracle up to one million") {
  const std::uint64_t N = 1000000;
  LengthSet s1 = enumerate_S1(N);
  CHECK(s1.test(0));  // degenerate length is a member by convention
  std::uint64_t count = 0;
  for (std::uint64_t n = 1; n <= N; ++n) {
    bool want = member_oracle(n);
    if (s1.test(n) != want) {
      CAPTURE(n);
      REQUIRE(s1.test(n) == want);
    }
    if (want) ++count;
    auto w = golay_membership(n);
    if (w.has_value() != want) {
      CAPTURE(n);
      REQUIRE(w.has_value() == want);
    }
    if (w) {
      // witness exponents reproduce n and satisfy the rule
      std::uint64_t back = 1;
      for (int k = 0; k < w->a + w->u; ++k) back *= 2;
      for (int k = 0; k < w->b3; ++k) back *= 3;
      for (int k = 0; k < w->c5; ++k) back *= 5;
      for (int k = 0; k < w->d11; ++k) back *= 11;
      for (int k = 0; k < w->e13; ++k) back *= 13;
      CHECK(back == n);
      CHECK(w->u <= w->c5 + w->e13);
      CHECK(w->b3 + w->c5 + w->d11 + w->e13 <= w->a + 2 * w->u + 1);
    }
  }
  CHECK(s1.count_upto(N) == count);
  auto sorted = golay_numbers_upto(N);
  CHECK(sorted.size() == count);
  for (auto v : sorted) CHECK(s1.test(v));
  CHECK(std::is_sorted(sorted.begin(), sorted.end()));
}

TEST_CASE("product membership witnesses match a divisor-scan oracle") {
  const std::uint64_t N = 10000;
  LengthSet s1 = enumerate_S1(N);
  std::mt19937_64 rng(40101);
  for (int it = 0; it < 200; ++it) {
    std::uint64_t n = 1 + rng() % N;
    for (int k = 2; k <= 3; ++k) {
      auto w = golay_product_membership(n, k);
      bool possible = false;
      if (k == 2) {
        for (std::uint64_t d = 1; d * d <= n && !possible; ++d)
          if (n % d == 0 && s1.test(d) && s1.test(n / d)) possible = true;
      } else {
        for (std::uint64_t d = 1; d <= n && !possible; ++d)
          if (n % d == 0 && s1.test(d))
            for (std::uint64_t e = 1; e * e <= n / d && !possible; ++e)
              if ((n / d) % e == 0 && s1.test(e) && s1.test(n / d / e)) possible = true;
      }
      CHECK(w.has_value() == possible);
      if (w) {
        REQUIRE(w->size() == std::size_t(k));
        std::uint64_t prod = 1;
        for (auto f : *w) {
          CHECK(s1.test(f));
          prod *= f;
        }
        CHECK(prod == n);
      }
    }
  }
}

TEST_CASE("two-level sums match the explicit witness search") {
  const std::uint64_t N = 20000;
  LengthSet s1 = enumerate_S1(N);
  LengthSet s2 = build_Sk(N, 2, false);
  for (std::uint64_t n = 1; n <= N; ++n) {
    auto w = s2_witness(n, s1);
    if (w.has_value() != s2.test(n)) {
      CAPTURE(n);
      REQUIRE(w.has_value() == s2.test(n));
    }
    if (w) {
      CHECK(s1.test(w->s));
      CHECK(s1.test(w->t));
      CHECK(s1.test(w->u));
      CHECK(w->t >= w->u);
      CHECK(w->s * (w->t + w->u) == n);
    }
  }
}

TEST_CASE("level sets nest and the first two-level gap is pinned") {
  const std::uint64_t N = 200000;
  LengthSet s1 = enumerate_S1(N);
  LengthSet s2 = build_Sk(N, 2, false);
  LengthSet s3 = build_Sk(N, 3, false);
  for (std::uint64_t n = 0; n <= N; ++n) {
    if (s1.test(n)) CHECK(s2.test(n));
    if (s2.test(n)) CHECK(s3.test(n));
  }
  auto gap1 = s1.first_gap(1);
  REQUIRE(gap1.has_value());
  CHECK(*gap1 == 7);
  auto gap2 = s2.first_gap(1);
  REQUIRE(gap2.has_value());
  CHECK(*gap2 == 127);
  // three levels cover everything this far out
  CHECK_FALSE(s3.first_gap(1).has_value());
}

TEST_CASE("dense option only ever widens the sets") {
  const std::uint64_t N = 10000;
  LengthSet plain = build_Sk(N, 3, false);
  LengthSet dense = build_Sk(N, 3, true);
  for (std::uint64_t n = 0; n <= N; ++n)
    if (plain.test(n)) CHECK(dense.test(n));
  DenseSets ds = build_dense_sets(N, false);
  DenseSets rs = build_dense_sets(N, true);
  for (std::uint64_t n = 0; n <= N; ++n) {
    if (rs.B.test(n)) CHECK(ds.B.test(n));  // restricted base values are a subset
    if (ds.B.test(n)) CHECK(n % 2 == 1);    // base values are odd lengths 2b+1
  }
}

TEST_CASE("scaling base selection stays in range and factors correctly") {
  LengthSet s1 = enumerate_S1(1 << 20);
  for (std::uint64_t bound : {100ull, 1000ull, 10000ull, 250000ull}) {
    std::uint64_t p = choose_P(bound);
    CHECK(p <= bound + 1);
    CHECK(p > bound / 2);  // {2,10,26}*S1 is dense enough for a near-bound hit
    bool ok = false;
    for (std::uint64_t base : {2ull, 10ull, 26ull})
      if (p % base == 0 && s1.test(p / base)) ok = true;
    CHECK(ok);
  }
}

TEST_CASE("divisor filtering matches a direct scan") {
  std::mt19937_64 rng(40102);
  auto sorted = golay_numbers_upto(100000);
  LengthSet s1 = enumerate_S1(100000);
  for (int it = 0; it < 100; ++it) {
    std::uint64_t n = 1 + rng() % 100000;
    auto divs = golay_divisors(n, sorted);
    std::vector<std::uint64_t> want;
    for (std::uint64_t d = 1; d <= n; ++d)
      if (n % d == 0 && s1.test(d)) want.push_back(d);
    CHECK(divs == want);
  }
}

TEST_CASE("supplementary coverage bound behaves sanely at small budgets") {
  // gamma = 4 allows two pair terms or one quad term; the bound must be
  // positive, monotone in gamma, and no larger when the catalog is restricted
  BValue b4 = compute_b_table(4, 0, 2000, true);
  BValue b6 = compute_b_table(6, 0, 2000, true);
  CHECK(b4.value >= 1);
  CHECK(b6.value >= b4.value);
  CHECK_FALSE(b4.restricted);
  BValue b4r = compute_b_table(4, 0, 2000, false);
  CHECK(b4r.restricted);
  CHECK(b4r.value <= b4.value);
  // scaling the target by powers of two never shrinks coverage
  BValue b4s = compute_b_table(4, 1, 2000, true);
  CHECK(b4s.value >= b4.value);
}
