#include "gcs/golay.hpp"

#include <algorithm>
#include <array>

namespace gcs {

namespace {

constexpr std::array<std::uint64_t, 5> kPrimes{2, 3, 5, 11, 13};

struct Factored {
  std::array<int, 5> exp{};
  bool smooth = false;
};

Factored factor_smooth(std::uint64_t n) {
  Factored f;
  if (n == 0) return f;
  for (std::size_t i = 0; i < kPrimes.size(); i++) {
    while (n % kPrimes[i] == 0) {
      n /= kPrimes[i];
      f.exp[i]++;
    }
  }
  f.smooth = n == 1;
  return f;
}

bool exponent_rule(const std::array<int, 5>& e, int k) {
  const int two = e[0], b = e[1], c = e[2], d = e[3], ee = e[4];
  const int u = std::min(two, c + ee);
  return b + c + d + ee <= two + u + k;
}

void gen_smooth(std::size_t idx, std::uint64_t value, std::array<int, 5>& exp, std::uint64_t N,
                std::vector<std::uint64_t>& out) {
  if (idx == kPrimes.size()) {
    if (exponent_rule(exp, 1)) out.push_back(value);
    return;
  }
  std::uint64_t v = value;
  for (int e = 0;; e++) {
    exp[idx] = e;
    gen_smooth(idx + 1, v, exp, N, out);
    if (v > N / kPrimes[idx]) break;
    v *= kPrimes[idx];
  }
  exp[idx] = 0;
}

}  // namespace

std::optional<GolayExponents> golay_membership(std::uint64_t n) {
  if (n == 0) return std::nullopt;
  Factored f = factor_smooth(n);
  if (!f.smooth || !exponent_rule(f.exp, 1)) return std::nullopt;
  GolayExponents g;
  g.u = std::min(f.exp[0], f.exp[2] + f.exp[4]);
  g.a = f.exp[0] - g.u;
  g.b3 = f.exp[1];
  g.c5 = f.exp[2];
  g.d11 = f.exp[3];
  g.e13 = f.exp[4];
  return g;
}

std::vector<std::uint64_t> golay_numbers_upto(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  std::array<int, 5> exp{};
  gen_smooth(0, 1, exp, n, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint64_t> golay_divisors(std::uint64_t n,
                                          const std::vector<std::uint64_t>& golay_sorted) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t g : golay_sorted) {
    if (g > n) break;
    if (g >= 1 && n % g == 0) out.push_back(g);
  }
  return out;
}

namespace {

bool product_witness(std::uint64_t n, int k, const std::vector<std::uint64_t>& golay_sorted,
                     std::uint64_t min_factor, std::vector<std::uint64_t>& acc) {
  if (k == 1) {
    if (n >= min_factor && golay_membership(n)) {
      acc.push_back(n);
      return true;
    }
    return false;
  }
  for (std::uint64_t g : golay_divisors(n, golay_sorted)) {
    if (g < min_factor) continue;
    acc.push_back(g);
    if (product_witness(n / g, k - 1, golay_sorted, g, acc)) return true;
    acc.pop_back();
  }
  return false;
}

}  // namespace

std::optional<std::vector<std::uint64_t>> golay_product_membership(std::uint64_t n, int k) {
  if (n == 0 || k < 1) return std::nullopt;
  Factored f = factor_smooth(n);
  if (!f.smooth || !exponent_rule(f.exp, k)) return std::nullopt;
  auto golay = golay_numbers_upto(n);
  std::vector<std::uint64_t> acc;
  if (product_witness(n, k, golay, 1, acc)) {
    // nondecreasing witness back in construction-friendly order
    std::sort(acc.begin(), acc.end());
    return acc;
  }
  return std::nullopt;
}

LengthSet enumerate_S1(std::uint64_t N) {
  LengthSet s(N);
  s.set(0);
  for (std::uint64_t g : golay_numbers_upto(N)) s.set(g);
  return s;
}

DenseSets build_dense_sets_with(const LengthSet& B, std::uint64_t N) {
  DenseSets ds;
  LengthSet s1 = enumerate_S1(N);
  ds.B = B;

  // squares of S1 with the degenerate one-term sums: 0 in S1 makes single
  // products members of S1^2 + S1^2
  LengthSet g2 = square_set(s1, N);
  LengthSet sqsum = sum_set(g2, g2, N);
  sqsum.or_with(g2);

  ds.E = LengthSet(N);
  ds.E.or_with(ds.B);
  ds.E.or_with(scale_set(product_set(s1, ds.B, N), 2, N));
  ds.E.or_with(scale_set(sqsum, 2, N));

  // F = E^2; then feed 4*S1*F back into E until both stabilize
  ds.F = square_set(ds.E, N);
  for (;;) {
    LengthSet growth = scale_set(product_set(s1, ds.F, N), 4, N);
    LengthSet e_next = ds.E;
    e_next.or_with(growth);
    if (e_next == ds.E) break;
    ds.E = std::move(e_next);
    ds.F = square_set(ds.E, N);
  }
  return ds;
}

DenseSets build_dense_sets(std::uint64_t N, bool restricted_B) {
  LengthSet B(N);
  if (!restricted_B) {
    for (std::uint64_t b = 1; b <= 38; b++)
      if (2 * b + 1 <= N) B.set(2 * b + 1);
  } else {
    if (15 <= N) B.set(15);  // CBS(8,7) seed
  }
  for (std::uint64_t g : enumerate_S1(N).members())
    if (2 * g + 1 <= N) B.set(2 * g + 1);
  return build_dense_sets_with(B, N);
}

LengthSet build_Sk(std::uint64_t N, int k, bool dense) {
  if (k < 1) fail(Errc::InvalidArgument, "build_Sk: k must be >= 1");
  LengthSet s1 = enumerate_S1(N);
  if (k == 1) return s1;
  LengthSet cur = s1;
  for (int level = 2; level <= k; level++) {
    LengthSet sums = sum_set(cur, cur, N);
    cur = product_set(s1, sums, N);
    cur.set(0);
    if (level == 2 && dense) {
      DenseSets ds = build_dense_sets(N, false);
      cur.or_with(ds.E);
      cur.or_with(ds.F);
      cur.or_with(product_set(s1, ds.B, N));
      cur.or_with(scale_set(product_set(s1, ds.F, N), 2, N));
    }
  }
  return cur;
}

std::uint64_t choose_P(std::uint64_t N_verified) {
  const std::uint64_t cap = N_verified + 1;
  std::uint64_t best = 0;
  for (std::uint64_t base : {std::uint64_t{2}, std::uint64_t{10}, std::uint64_t{26}}) {
    for (std::uint64_t g : golay_numbers_upto(cap / base)) {
      const std::uint64_t p = base * g;
      if (p <= cap && p > best) best = p;
    }
  }
  if (best == 0) fail(Errc::UnsupportedLength, "choose_P: no scale factor <= " + std::to_string(cap));
  return best;
}

BValue compute_b_table(int gamma, int i, std::uint64_t limit, bool corpus_loaded) {
  if (gamma != 4 && gamma != 6 && gamma != 8)
    fail(Errc::InvalidArgument, "compute_b_table: gamma must be 4, 6 or 8");
  if (i < 0 || i > 40 || limit == 0) fail(Errc::InvalidArgument, "compute_b_table: bad i or limit");
  const std::uint64_t bound = limit << i;
  charge_memory((bound / 8 + 1) * 12, "compute_b_table");

  LengthSet s1 = enumerate_S1(bound);
  LengthSet g1 = s1;
  g1.clear(0);
  LengthSet g2 = square_set(g1, bound);          // single pair-product terms
  LengthSet g2g2 = sum_set(g2, g2, bound);       // two-term sums
  LengthSet g1g1 = sum_set(g1, g1, bound);       // pair-pair CBS half sums

  DenseSets ds = build_dense_sets(bound, !corpus_loaded);

  // CBS term catalogs: (s1+s2) values times a pair length t. A standalone
  // CBS term admits every even equal-length CBS total (F restricted to even
  // sums appears only there); CBS terms mixed with other terms use doubled
  // F values.
  LengthSet base_std = ds.B;
  base_std.or_with(scale_set(ds.F, 2, bound));
  base_std.or_with(g1g1);
  LengthSet base_rich = ds.B;
  base_rich.or_with(even_part(ds.F));
  base_rich.or_with(g1g1);
  LengthSet ct_std = product_set(base_std, g1, bound);
  LengthSet ct_rich = product_set(base_rich, g1, bound);

  LengthSet reach = g2;
  reach.or_with(g2g2);
  reach.or_with(ct_rich);
  if (gamma >= 6) {
    reach.or_with(sum_set(g2g2, g2, bound));
    reach.or_with(sum_set(g2, ct_std, bound));
  }
  if (gamma >= 8) {
    reach.or_with(sum_set(g2g2, g2g2, bound));
    reach.or_with(sum_set(g2g2, ct_std, bound));
    reach.or_with(sum_set(ct_std, ct_std, bound));
  }

  BValue out;
  out.restricted = !corpus_loaded;
  for (std::uint64_t b = 1; b <= limit; b++) {
    if (!reach.test(b << i)) {
      out.value = b - 1;
      return out;
    }
  }
  out.value = limit;
  out.hit_limit = true;
  return out;
}

std::optional<S2Witness> s2_witness(std::uint64_t n, const LengthSet& s1) {
  if (n == 0) return std::nullopt;
  auto golay = golay_numbers_upto(n);
  for (std::uint64_t s : golay_divisors(n, golay)) {
    const std::uint64_t m = n / s;
    // t >= u, scanned with u ascending from 0 for the smallest witness
    for (std::uint64_t u = 0; 2 * u <= m; ) {
      const std::uint64_t t = m - u;
      if ((u == 0 || s1.test(u)) && t <= s1.bound() && s1.test(t)) return S2Witness{s, t, u};
      // advance u to the next S1 member (or stop)
      std::uint64_t next = u + 1;
      while (2 * next <= m && !s1.test(next)) next++;
      if (2 * next > m) break;
      u = next;
    }
  }
  return std::nullopt;
}

}  // namespace gcs
