// Signed permutation algebra against a dense +/-1 matrix oracle, the
// order-4 worked example checked entry by entry, and the block identity
// R_c(tau) = diag(R_a + R_b, R_a + R_b) at every fold stage.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "gcs/signed_perm.hpp"

using namespace gcs;

namespace {

using Mat = std::vector<std::int64_t>;  // row-major v*v

Mat dense(const SignedPerm& x) {
  Mat m(std::size_t(x.v) * x.v, 0);
  for (std::uint32_t c = 0; c < x.v; ++c) m[std::size_t(x.image[c]) * x.v + c] = x.sign[c];
  return m;
}

Mat matmul(const Mat& a, const Mat& b, std::uint32_t v) {
  Mat m(std::size_t(v) * v, 0);
  for (std::uint32_t i = 0; i < v; ++i)
    for (std::uint32_t k = 0; k < v; ++k) {
      std::int64_t aik = a[std::size_t(i) * v + k];
      if (!aik) continue;
      for (std::uint32_t j = 0; j < v; ++j) m[std::size_t(i) * v + j] += aik * b[std::size_t(k) * v + j];
    }
  return m;
}

Mat mtrans(const Mat& a, std::uint32_t v) {
  Mat m(std::size_t(v) * v, 0);
  for (std::uint32_t i = 0; i < v; ++i)
    for (std::uint32_t j = 0; j < v; ++j) m[std::size_t(j) * v + i] = a[std::size_t(i) * v + j];
  return m;
}

SignedPerm random_sp(std::mt19937_64& rng, std::uint32_t v) {
  SignedPerm x;
  x.v = v;
  x.image.resize(v);
  std::iota(x.image.begin(), x.image.end(), 0u);
  std::shuffle(x.image.begin(), x.image.end(), rng);
  x.sign.resize(v);
  for (auto& s : x.sign) s = rng() % 2 ? 1 : -1;
  return x;
}

SPSeq random_spseq(std::mt19937_64& rng, std::uint32_t v, std::size_t n) {
  SPSeq s;
  s.v = v;
  for (std::size_t i = 0; i < n; ++i) {
    if (rng() % 4 == 0)
      s.entries.push_back(std::nullopt);
    else
      s.entries.push_back(random_sp(rng, v));
  }
  return s;
}

// c = diag(s, s) with s a v x v integer matrix, checked against a 2v x 2v one
bool is_double_diag(const Mat& c, const Mat& s, std::uint32_t v) {
  for (std::uint32_t i = 0; i < 2 * v; ++i)
    for (std::uint32_t j = 0; j < 2 * v; ++j) {
      std::int64_t want = 0;
      if (i / v == j / v) want = s[std::size_t(i % v) * v + (j % v)];
      if (c[std::size_t(i) * 2 * v + j] != want) return false;
    }
  return true;
}

// every combine must satisfy R_c(tau) = diag(R_a(tau) + R_b(tau), same)
void check_combine_identity(const SPSeq& a, const SPSeq& b, const SPSeq& c, CorrMode mode) {
  MatProfile ra = spseq_corr(a, a, mode);
  MatProfile rb = spseq_corr(b, b, mode);
  MatProfile rc = spseq_corr(c, c, mode);
  REQUIRE(rc.mats.size() == ra.mats.size());
  for (std::size_t k = 0; k < rc.mats.size(); ++k) {
    Mat s(ra.mats[k].size());
    for (std::size_t e = 0; e < s.size(); ++e) s[e] = ra.mats[k][e] + rb.mats[k][e];
    CAPTURE(k);
    REQUIRE(is_double_diag(rc.mats[k], s, a.v));
  }
}

GcsSet pair_of(std::uint64_t len) { return seed_pair(len); }

}  // namespace

TEST_CASE("group operations agree with the dense matrix oracle") {
  std::mt19937_64 rng(60101);
  for (int it = 0; it < 300; ++it) {
    std::uint32_t v = 1u << (1 + rng() % 4);
    SignedPerm x = random_sp(rng, v), y = random_sp(rng, v), z = random_sp(rng, v);
    CHECK(sp_valid(x));
    CHECK(dense(sp_mul(x, y)) == matmul(dense(x), dense(y), v));
    CHECK(dense(sp_transpose(x)) == mtrans(dense(x), v));
    CHECK(sp_mul(x, sp_transpose(x)) == sp_identity(v));
    CHECK(sp_mul(sp_transpose(x), x) == sp_identity(v));
    CHECK(sp_mul(sp_mul(x, y), z) == sp_mul(x, sp_mul(y, z)));
    CHECK(sp_mul(x, sp_identity(v)) == x);
    CHECK(sp_mul(sp_identity(v), x) == x);
    Mat nd = dense(sp_neg(x));
    Mat d = dense(x);
    for (auto& e : d) e = -e;
    CHECK(nd == d);
    // transpose reverses products
    CHECK(sp_transpose(sp_mul(x, y)) == sp_mul(sp_transpose(y), sp_transpose(x)));
  }
  SignedPerm bad;
  bad.v = 2;
  bad.image = {0, 0};
  bad.sign = {1, 1};
  CHECK_FALSE(sp_valid(bad));
}

TEST_CASE("the order-2 scalar representation is a homomorphism") {
  const GaussInt units[4] = {kOne, -kOne, kImag, -kImag};
  for (GaussInt z1 : units)
    for (GaussInt z2 : units) CHECK(rep2(z1 * z2) == sp_mul(rep2(z1), rep2(z2)));
  for (GaussInt z : units) CHECK(rep2(z.conj()) == sp_transpose(rep2(z)));
  CHECK(rep2(kOne) == sp_identity(2));
  CHECK_THROWS_AS(rep2(kZero), Error);
  CHECK_THROWS_AS(rep2(GaussInt{1, 1}), Error);
}

TEST_CASE("block assemblies have the expected dense layouts") {
  std::mt19937_64 rng(60102);
  for (int it = 0; it < 100; ++it) {
    std::uint32_t v = 1u << (1 + rng() % 3);
    SignedPerm a = random_sp(rng, v), b = random_sp(rng, v);
    Mat da = dense(a), db = dense(b);

    Mat de = dense(sp_embed(a));
    CHECK(is_double_diag(de, da, v));
    CHECK(sp_embed_to(a, 4 * v).v == 4 * v);

    Mat dd = dense(sp_block_diag(a, b));
    Mat dad = dense(sp_anti_diag(a, b));
    for (std::uint32_t i = 0; i < 2 * v; ++i)
      for (std::uint32_t j = 0; j < 2 * v; ++j) {
        std::int64_t bd = 0, ad = 0;
        if (i < v && j < v) bd = da[std::size_t(i) * v + j];
        if (i >= v && j >= v) bd = db[std::size_t(i - v) * v + (j - v)];
        if (i < v && j >= v) ad = da[std::size_t(i) * v + (j - v)];  // top-right block
        if (i >= v && j < v) ad = db[std::size_t(i - v) * v + j];    // bottom-left block
        CHECK(dd[std::size_t(i) * 2 * v + j] == bd);
        CHECK(dad[std::size_t(i) * 2 * v + j] == ad);
      }
  }
}

TEST_CASE("sequence correlation profiles match dense matrix sums") {
  std::mt19937_64 rng(60103);
  for (int it = 0; it < 120; ++it) {
    std::uint32_t v = 1u << (1 + rng() % 2);
    std::size_t n = 1 + rng() % 12;
    SPSeq a = random_spseq(rng, v, n), b = random_spseq(rng, v, n);
    std::vector<Mat> da(n), db(n);
    for (std::size_t i = 0; i < n; ++i) {
      da[i] = a.entries[i] ? dense(*a.entries[i]) : Mat(std::size_t(v) * v, 0);
      db[i] = b.entries[i] ? dense(*b.entries[i]) : Mat(std::size_t(v) * v, 0);
    }
    MatProfile ap = spseq_corr(a, b, CorrMode::kAperiodic);
    CHECK(ap.lag_min == 1 - std::int64_t(n));
    for (std::int64_t tau = 1 - std::int64_t(n); tau <= std::int64_t(n) - 1; ++tau) {
      Mat want(std::size_t(v) * v, 0);
      for (std::int64_t i = 0; i < std::int64_t(n); ++i) {
        std::int64_t j = i - tau;
        if (j < 0 || j >= std::int64_t(n)) continue;
        Mat term = matmul(da[i], mtrans(db[j], v), v);
        for (std::size_t e = 0; e < want.size(); ++e) want[e] += term[e];
      }
      CHECK(ap.at(tau) == want);
    }
    MatProfile pp = spseq_corr(a, b, CorrMode::kPeriodic);
    for (std::size_t tau = 0; tau < n; ++tau) {
      Mat want(std::size_t(v) * v, 0);
      for (std::size_t i = 0; i < n; ++i) {
        Mat term = matmul(da[i], mtrans(db[(i + n - tau) % n], v), v);
        for (std::size_t e = 0; e < want.size(); ++e) want[e] += term[e];
      }
      CHECK(pp.at(std::int64_t(tau)) == want);
    }
  }
}

TEST_CASE("the order-4 worked combination matches entry by entry") {
  const GaussInt m1{-1, 0}, mi{0, -1};
  QSeq a{kZero, mi, kZero, m1, kZero};
  QSeq b{kOne, kZero, kZero, kZero, mi};
  SPSeq x = to_sp2(a), y = to_sp2(b);
  SPSeq c = sp_combine(x, y);
  REQUIRE(c.v == 4);
  REQUIRE(c.size() == 5);

  auto entry = [&](std::size_t i) {
    REQUIRE(c.entries[i].has_value());
    return dense(*c.entries[i]);
  };
  CHECK(entry(0) == Mat{0, 0, 1, 0, 0, 0, 0, 1, 0, 1, 0, 0, -1, 0, 0, 0});
  CHECK(entry(1) == Mat{0, 1, 0, 0, -1, 0, 0, 0, 0, 0, -1, 0, 0, 0, 0, -1});
  CHECK_FALSE(c.entries[2].has_value());
  CHECK(entry(3) == Mat{-1, 0, 0, 0, 0, -1, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0});
  CHECK(entry(4) == Mat{0, 0, 0, 1, 0, 0, -1, 0, -1, 0, 0, 0, 0, -1, 0, 0});

  // scalar profile sum R_a + R_b over lags -4..4
  auto pa = acorr_profile(a);
  auto pb = acorr_profile(b);
  const GaussInt want[9] = {kImag, kZero, kImag,  kZero, GaussInt{4, 0},
                            kZero, -kImag, kZero, -kImag};
  for (int k = 0; k < 9; ++k) CHECK(pa[k] + pb[k] == want[k]);

  // matrix profile: 4I at lag 0, zero at odd lags, the rotation block at
  // lags -2 and -4, negated at +2 and +4
  MatProfile rc = spseq_corr(c, c, CorrMode::kAperiodic);
  const Mat rot{0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0};
  Mat nrot = rot;
  for (auto& e : nrot) e = -e;
  CHECK(rc.is_scaled_identity(0, 4));
  for (std::int64_t tau : {-3, -1, 1, 3}) CHECK(rc.is_zero(tau));
  CHECK(rc.at(-2) == rot);
  CHECK(rc.at(-4) == rot);
  CHECK(rc.at(2) == nrot);
  CHECK(rc.at(4) == nrot);
  check_combine_identity(x, y, c, CorrMode::kAperiodic);
}

TEST_CASE("combine rejects each violated precondition") {
  // overlapping support
  CHECK_THROWS_AS(sp_combine(to_sp2({kOne, kZero}), to_sp2({kOne, kZero})), Error);
  // support not mirror-symmetric
  CHECK_THROWS_AS(sp_combine(to_sp2({kOne, kZero}), to_sp2({kZero, kImag})), Error);

  SignedPerm refl;  // diag(1, -1), symmetric but outside the scalar image
  refl.v = 2;
  refl.image = {0, 1};
  refl.sign = {1, -1};
  SignedPerm id2 = sp_identity(2);
  SignedPerm roti = rep2(kImag);

  // flip-transpose correlation mismatch: [i, 0, 0, diag(1,-1)]
  SPSeq bad_flip;
  bad_flip.v = 2;
  bad_flip.entries = {roti, std::nullopt, std::nullopt, refl};
  SPSeq partner;
  partner.v = 2;
  partner.entries = {std::nullopt, id2, id2, std::nullopt};
  CHECK_THROWS_AS(sp_combine(bad_flip, partner), Error);

  // non-commuting entries: diag(1,-1) against the rotation
  SPSeq xr;
  xr.v = 2;
  xr.entries = {refl, std::nullopt, std::nullopt, refl};
  SPSeq yr;
  yr.v = 2;
  yr.entries = {std::nullopt, roti, roti, std::nullopt};
  CHECK_THROWS_AS(sp_combine(xr, yr), Error);

  try {
    sp_combine(xr, yr);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonCommutingEntries);
  }
}

TEST_CASE("generator rows are supplementary and periodic-complementary") {
  std::mt19937_64 rng(60104);
  for (int it = 0; it < 40; ++it) {
    std::vector<SupPairItem> pairs;
    std::vector<SupCbsItem> cbs_items;
    int k = 1 + int(rng() % 2);
    int d = int(rng() % 2);
    if (k + 2 * d > 3) k = 1;  // keep the fold order at 64 or below
    const std::uint64_t lens[3] = {1, 2, 3};
    for (int i = 0; i < k; ++i)
      pairs.push_back({pair_of(lens[rng() % 3]), pair_of(lens[rng() % 3])});
    for (int i = 0; i < d; ++i) {
      GcsSet cbs = rng() % 2 ? cbs_seed_87() : cbs_from_pair(pair_of(lens[rng() % 3]));
      std::uint64_t t = lens[rng() % 2];
      cbs_items.push_back({cbs, pair_of(t), pair_of(t)});
    }
    SupRows out = supplementary_rows(pairs, cbs_items);

    // expected total and offsets
    std::uint64_t n = 0;
    std::vector<std::uint64_t> inc;
    for (const auto& p : pairs) {
      inc.push_back(p.ef.n * p.gh.n);
      n += 4 * p.ef.n * p.gh.n;
    }
    for (const auto& cb : cbs_items) {
      inc.push_back(cb.cbs.cbs_s1 * cb.mult1.n);
      inc.push_back(cb.cbs.cbs_s2 * cb.mult1.n);
      n += 4 * (cb.cbs.cbs_s1 + cb.cbs.cbs_s2) * cb.mult1.n;
    }
    CHECK(out.n == n);
    REQUIRE(out.lambda.size() == inc.size() + 1);
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < inc.size(); ++i) {
      CHECK(out.lambda[i] == acc);
      acc += inc[i];
    }
    CHECK(out.lambda.back() == acc);
    CHECK(acc == n / 4);

    // supports of all rows partition the index range (supplementary), and
    // the periodic profiles sum to n * delta (complementary)
    std::vector<int> covered(n, 0);
    std::vector<GaussInt> psum(n, kZero);
    for (const auto& [ai, bi] : out.seqs) {
      REQUIRE(ai.size() == n);
      REQUIRE(bi.size() == n);
      for (std::size_t e = 0; e < n; ++e) {
        if (!ai[e].is_zero()) ++covered[e];
        if (!bi[e].is_zero()) ++covered[e];
      }
      auto ca = pcorr_profile(ai), cb = pcorr_profile(bi);
      for (std::size_t e = 0; e < n; ++e) psum[e] = psum[e] + ca[e] + cb[e];
    }
    for (std::size_t e = 0; e < n; ++e) CHECK(covered[e] == 1);
    for (std::size_t e = 0; e < n; ++e)
      CHECK(psum[e] == (e == 0 ? GaussInt{std::int64_t(n), 0} : kZero));
  }
}

TEST_CASE("the minimal generator configuration is pinned") {
  SupRows out = supplementary_rows({{trivial_pair(), trivial_pair()}}, {});
  CHECK(out.n == 4);
  REQUIRE(out.seqs.size() == 1);
  CHECK(out.seqs[0].first == (QSeq{kOne, kZero, kZero, kOne}));
  CHECK(out.seqs[0].second == (QSeq{kZero, -kOne, kOne, kZero}));
  SPSeq c = perfect_from_inputs(out);
  CHECK(c.v == 4);
  CHECK(c.size() == 4);
  CHECK_FALSE(imperfection_lag(c).has_value());
}

TEST_CASE("the fold identity holds at every stage, both modes") {
  std::mt19937_64 rng(60105);
  int combines_checked = 0;
  for (int it = 0; it < 25 || combines_checked < 100; ++it) {
    std::vector<SupPairItem> pairs;
    std::vector<SupCbsItem> cbs_items;
    int k = 1 + int(rng() % 2);
    int d = (k == 1 && rng() % 2) ? 1 : 0;  // orders 4, 16 or 64
    const std::uint64_t lens[3] = {1, 2, 3};
    for (int i = 0; i < k; ++i)
      pairs.push_back({pair_of(lens[rng() % 3]), pair_of(lens[rng() % 3])});
    for (int i = 0; i < d; ++i) {
      GcsSet cbs = cbs_from_pair(pair_of(lens[rng() % 3]));
      std::uint64_t t = lens[rng() % 2];
      cbs_items.push_back({cbs, pair_of(t), pair_of(t)});
    }
    SupRows rows = supplementary_rows(pairs, cbs_items);

    std::vector<SPSeq> seqs;
    for (const auto& [ai, bi] : rows.seqs) {
      seqs.push_back(to_sp2(ai));
      seqs.push_back(to_sp2(bi));
    }
    SPSeq c = seqs[0];
    for (std::size_t i = 1; i < seqs.size(); ++i) {
      SPSeq next;
      next.v = c.v;
      for (const auto& e : seqs[i].entries)
        next.entries.push_back(e ? std::optional<SignedPerm>(sp_embed_to(*e, c.v)) : std::nullopt);
      SPSeq folded = sp_combine(c, next);
      check_combine_identity(c, next, folded, CorrMode::kAperiodic);
      check_combine_identity(c, next, folded, CorrMode::kPeriodic);
      ++combines_checked;
      c = folded;
    }
    // the finished fold is perfect and identical to the library's own
    CHECK_FALSE(imperfection_lag(c).has_value());
    SPSeq lib = perfect_from_inputs(rows);
    CHECK(lib.v == c.v);
    REQUIRE(lib.size() == c.size());
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(lib.entries[i] == c.entries[i]);
  }
  CHECK(combines_checked >= 100);
}

TEST_CASE("imperfection detection pinpoints broken lags") {
  SupRows out = supplementary_rows({{pair_of(2), pair_of(2)}}, {});
  SPSeq c = perfect_from_inputs(out);
  CHECK_FALSE(imperfection_lag(c).has_value());
  // flipping one sign must surface at some lag
  SPSeq broken = c;
  REQUIRE(broken.entries[1].has_value());
  broken.entries[1] = sp_neg(*broken.entries[1]);
  auto bad = imperfection_lag(broken);
  REQUIRE(bad.has_value());
  MatProfile prof = spseq_corr(broken, broken, CorrMode::kPeriodic);
  if (*bad == 0)
    CHECK_FALSE(prof.is_scaled_identity(0, std::int64_t(broken.size())));
  else
    CHECK_FALSE(prof.is_zero(std::int64_t(*bad)));
  // a zero entry voids perfection immediately
  SPSeq gap = c;
  gap.entries[0] = std::nullopt;
  CHECK(imperfection_lag(gap) == 0);
}
