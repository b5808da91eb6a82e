#include "gcs/construct.hpp"

#include <algorithm>

#include "gcs/io.hpp"

namespace gcs {

namespace {

// the worked examples stack copies of x scaled by entries of y
QSeq pkron(const QSeq& x, const QSeq& y) { return kron(y, x); }

QSeq seq_of(std::initializer_list<int> vals) {
  QSeq r;
  for (int v : vals) {
    switch (v) {
      case 1: r.push_back(kOne); break;
      case -1: r.push_back(-kOne); break;
      case 2: r.push_back(kImag); break;
      case -2: r.push_back(-kImag); break;
      default: r.push_back(kZero); break;
    }
  }
  return r;
}

// entrywise (a + b + (b* - a*)) / 4 and (a + b - (b* - a*)) / 4; the
// quarter sequences of a 2-phase pair, exact in scaled integers
std::pair<QSeq, QSeq> quarter_pq(const QSeq& a, const QSeq& b) {
  const QSeq fb = flip_conj(b), fa = flip_conj(a);
  QSeq p(a.size()), q(a.size());
  for (std::size_t i = 0; i < a.size(); i++) {
    const GaussInt core = a[i] + b[i];
    const GaussInt delta = fb[i] - fa[i];
    const GaussInt p4 = core + delta, q4 = core - delta;
    if (p4.re % 4 != 0 || p4.im % 4 != 0 || q4.re % 4 != 0 || q4.im % 4 != 0)
      fail(Errc::QuarterScaleViolation,
           "quarter sequence entry " + std::to_string(i) + " not divisible by 4");
    p[i] = {p4.re / 4, p4.im / 4};
    q[i] = {q4.re / 4, q4.im / 4};
  }
  return {p, q};
}

void require_certified(const GcsSet& s, const char* where) {
  if (!s.certified) fail(Errc::NotCertifiedInput, std::string(where) + ": input not certified");
}

void require_pair(const GcsSet& s, const char* where) {
  if (s.cardinality() != 2 || s.seqs[0].size() != s.seqs[1].size())
    fail(Errc::NotPair, std::string(where) + ": expected a pair of equal lengths");
}

// certify when within the entry budget; otherwise leave the flag down and
// let plan checks carry the claim
void certify_or_defer(GcsSet& set, const char* what, const VerifyOptions& opt) {
  std::size_t total = 0;
  for (const auto& s : set.seqs) total += s.size();
  if (total > opt.budget_entries) {
    set.certified = false;
    std::int64_t w = 0;
    for (const auto& s : set.seqs) w += weight(s);
    set.weight_sum = w;
    return;
  }
  VerifyReport rep = require_gcs_set(set.seqs, what, opt);
  set.weight_sum = rep.weight_sum;
  set.certified = true;
}

GcsSet finish(std::vector<QSeq> seqs, const char* what, const VerifyOptions& opt) {
  GcsSet set;
  set.seqs = std::move(seqs);
  for (const auto& s : set.seqs) set.n = std::max(set.n, s.size());
  certify_or_defer(set, what, opt);
  return set;
}

std::uint64_t next_pow2(std::uint64_t v) {
  std::uint64_t p = 1;
  while (p < v) p <<= 1;
  return p;
}

}  // namespace

// ---- plan arithmetic ----

std::size_t Plan::node_count() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.node_count();
  return n;
}

namespace {

struct PlanExpect {
  std::uint64_t len = 0, card = 0;
  std::uint64_t cbs_s1 = 0, cbs_s2 = 0;  // meaningful for CBS-producing nodes
};

PlanExpect expect_of(const Plan& p) {
  auto child = [&](std::size_t i) -> PlanExpect { return expect_of(p.children.at(i)); };
  PlanExpect e;
  if (p.kind == "seed") {
    e.len = p.length;
    e.card = 2;
  } else if (p.kind == "trivial") {
    e.len = 1;
    e.card = 2;
  } else if (p.kind == "craigen") {
    const PlanExpect t = child(0), u = child(1);
    e.len = std::stoull(p.seed_id) * t.len * u.len;
    e.card = 2;
  } else if (p.kind == "sumprod") {
    const PlanExpect a = child(0), x = child(1);
    std::uint64_t m_card, t_len, u_len;
    if (p.children.size() == 2 && x.cbs_s1 != 0 && p.u != 0) {
      // one CBS child supplies both halves, regrouped (s1, s2, s1, s2)
      m_card = x.card / 2;
      t_len = x.cbs_s1;
      u_len = x.cbs_s2;
    } else if (p.children.size() == 2) {
      m_card = x.card;
      t_len = x.len;
      u_len = 0;
    } else {
      const PlanExpect y = child(2);
      if (y.card != x.card)
        fail(Errc::PlanArithmeticMismatch, "sumprod half cardinalities differ");
      m_card = x.card;
      t_len = x.len;
      u_len = y.len;
    }
    if (t_len != p.t || u_len != p.u)
      fail(Errc::PlanArithmeticMismatch, "sumprod grouping disagrees with children");
    e.len = a.len * (p.t + p.u);
    e.card = a.card * m_card;
  } else if (p.kind == "qscale") {
    const PlanExpect a = child(0), b = child(1);
    e.len = a.len * b.len * std::stoull(p.seed_id);
    e.card = a.card * b.card / 2;
  } else if (p.kind == "cbs_seed") {
    e.card = 4;
    e.cbs_s1 = p.t;
    e.cbs_s2 = p.u;
    e.len = p.t;
  } else if (p.kind == "cbs_from_pair") {
    e.card = 4;
    if (p.t != 0) {
      // explicit pair-split shape; a u of 0 marks the degenerate empty half
      // whose child is only a placeholder leaf
      e.cbs_s1 = p.t;
      e.cbs_s2 = p.u;
      if (child(0).len != p.t || (p.u != 0 && child(1).len != p.u))
        fail(Errc::PlanArithmeticMismatch, "cbs_from_pair split disagrees with children");
      if (p.u == 0 && p.children.size() > 1) (void)child(1);
    } else if (p.children.size() == 1) {
      const PlanExpect g = child(0);
      e.cbs_s1 = g.len + 1;
      e.cbs_s2 = g.len;
    } else {
      e.cbs_s1 = child(0).len;
      e.cbs_s2 = child(1).len;
    }
    e.len = std::max(e.cbs_s1, e.cbs_s2);
  } else if (p.kind == "yang") {
    e.card = 4;
    if (p.route == "interleave") {
      const PlanExpect c = child(0);
      e.len = c.cbs_s1 + c.cbs_s2;
    } else if (p.route == "concat") {
      const PlanExpect c = child(0), p1 = child(1), p2 = child(2);
      e.len = 2 * (c.cbs_s1 * p1.len + c.cbs_s2 * p2.len);
    } else if (p.route == "combine") {
      e.len = child(0).len * child(1).len;
      e.cbs_s1 = e.cbs_s2 = e.len;
    } else {
      fail(Errc::PlanArithmeticMismatch, "unknown yang route " + p.route);
    }
  } else if (p.kind == "scale") {
    const PlanExpect c = child(0);
    if (p.factor_base * p.factor_g != p.factor)
      fail(Errc::PlanArithmeticMismatch, "scale factor decomposition mismatch");
    e.len = c.len * p.factor;
    e.card = c.card;
  } else if (p.kind == "hier") {
    std::uint64_t total = 0, kmax = 0;
    for (const auto& c : p.children) {
      const PlanExpect ce = expect_of(c);
      total += ce.len;
      kmax = std::max(kmax, ce.card);
    }
    const std::uint64_t eta = next_pow2(p.children.size());
    if (p.pad_sets != eta - p.children.size())
      fail(Errc::PlanArithmeticMismatch, "hier padding count mismatch");
    e.len = total;
    e.card = kmax * eta;
  } else {
    fail(Errc::PlanArithmeticMismatch, "unknown plan kind " + p.kind);
  }
  if (p.expect_len != e.len || p.expect_card != e.card)
    fail(Errc::PlanArithmeticMismatch,
         p.kind + " node expects len " + std::to_string(p.expect_len) + " card " +
             std::to_string(p.expect_card) + " but recomputation gives len " +
             std::to_string(e.len) + " card " + std::to_string(e.card));
  return e;
}

Plan leaf_plan(std::string kind, std::uint64_t len, std::uint64_t card) {
  Plan p;
  p.kind = std::move(kind);
  p.expect_len = len;
  p.expect_card = card;
  return p;
}

}  // namespace

void check_plan_arithmetic(const Plan& plan) { (void)expect_of(plan); }

// ---- seeds ----

GcsSet trivial_pair() {
  GcsSet s;
  s.seqs = {QSeq{kOne}, QSeq{kOne}};
  s.n = 1;
  s.weight_sum = 2;
  s.certified = true;
  return s;
}

GcsSet seed_pair(std::uint64_t length) {
  std::vector<QSeq> seqs;
  switch (length) {
    case 1:
      return trivial_pair();
    case 2:
      seqs = {seq_of({1, 1}), seq_of({1, -1})};
      break;
    case 3:
      seqs = {seq_of({1, 1, -1}), seq_of({1, 2, 1})};
      break;
    case 5:
      seqs = {seq_of({2, 2, 1, -1, 1}), seq_of({2, 1, 1, 2, -1})};
      break;
    case 10:
      seqs = {seq_of({1, -1, -1, 1, -1, 1, -1, -1, -1, 1}),
              seq_of({1, -1, -1, -1, -1, -1, -1, 1, 1, -1})};
      break;
    case 11:
      seqs = {seq_of({1, 2, -1, 1, -1, 2, -2, -1, 2, 2, 1}),
              seq_of({1, 1, -2, -2, -2, 1, 1, 2, -1, 1, -1})};
      break;
    case 13:
      seqs = {seq_of({1, 1, 1, 2, -1, 1, 1, -2, 1, -1, 1, -2, 2}),
              seq_of({1, 2, -1, -1, -1, 2, -1, 1, 1, -2, -1, 1, -2})};
      break;
    case 26:
      seqs = {seq_of({-1, 1, -1, -1, 1, 1, -1, 1, 1, 1, 1, -1, -1,
                      -1, -1, -1, -1, -1, 1, 1, -1, -1, -1, 1, -1, 1}),
              seq_of({-1, 1, -1, -1, 1, 1, -1, 1, 1, 1, 1, -1, 1,
                      -1, 1, 1, 1, 1, -1, -1, 1, 1, 1, -1, 1, -1})};
      break;
    default:
      fail(Errc::UnsupportedSeedLength, "no seed pair of length " + std::to_string(length));
  }
  return make_certified(std::move(seqs), "seed_pair");
}

bool is_two_phase(const GcsSet& set) {
  for (const auto& s : set.seqs)
    for (auto v : s)
      if (v.im != 0) return false;
  return true;
}

// ---- compositions ----

GcsSet craigen_compose(const GcsSet& two_phase, const GcsSet& t_pair, const GcsSet& u_pair,
                       const VerifyOptions& opt) {
  require_pair(two_phase, "craigen_compose");
  require_pair(t_pair, "craigen_compose");
  require_pair(u_pair, "craigen_compose");
  require_certified(two_phase, "craigen_compose");
  require_certified(t_pair, "craigen_compose");
  require_certified(u_pair, "craigen_compose");
  if (!is_two_phase(two_phase))
    fail(Errc::NotTwoPhase, "craigen_compose: s-pair has imaginary entries");
  if (two_phase.n <= 1) fail(Errc::TrivialTwoPhase, "craigen_compose: s-pair must be nontrivial");

  auto [p, q] = quarter_pq(two_phase.seqs[0], two_phase.seqs[1]);
  const QSeq& c = t_pair.seqs[0];
  const QSeq& d = t_pair.seqs[1];
  const QSeq& e = u_pair.seqs[0];
  const QSeq& f = u_pair.seqs[1];
  const QSeq x = seq_add(pkron(p, c), pkron(q, d));
  const QSeq y = seq_add(pkron(flip_conj(q), c), neg(pkron(flip_conj(p), d)));
  const QSeq g = seq_add(pkron(x, e), pkron(y, f));
  const QSeq h = seq_add(pkron(flip_conj(y), e), neg(pkron(flip_conj(x), f)));
  return finish({g, h}, "craigen_compose", opt);
}

GcsSet sum_product_compose(const GcsSet& setA, const GcsSet& setB, std::uint64_t t, std::uint64_t u,
                    const VerifyOptions& opt) {
  if (setA.cardinality() % 2 != 0 || setA.cardinality() == 0 || setB.cardinality() % 2 != 0 ||
      setB.cardinality() == 0)
    fail(Errc::OddCardinality, "sum_product_compose: set cardinalities must be even and nonzero");
  const std::size_t s = setA.seqs[0].size();
  for (const auto& a : setA.seqs)
    if (a.size() != s) fail(Errc::LengthMismatch, "sum_product_compose: setA lengths differ");
  const std::size_t M = setB.cardinality() / 2;
  for (std::size_t m = 0; m < M; m++) {
    if (setB.seqs[2 * m].size() != t || setB.seqs[2 * m + 1].size() != u)
      fail(Errc::GroupingMismatch, "sum_product_compose: declared grouping (" + std::to_string(t) + "," +
                                       std::to_string(u) + ") inconsistent with member " +
                                       std::to_string(2 * m) + "/" + std::to_string(2 * m + 1));
  }

  std::vector<QSeq> bp(2 * M);
  for (std::size_t m = 0; m < M; m++) {
    bp[2 * m] = cat(setB.seqs[2 * m], zeros(u));
    bp[2 * m + 1] = cat(zeros(t), setB.seqs[2 * m + 1]);
  }
  std::vector<QSeq> out;
  out.reserve(setA.cardinality() * M);
  for (std::size_t l = 0; l < setA.cardinality() / 2; l++) {
    const QSeq& a_odd = setA.seqs[2 * l];
    const QSeq& a_even = setA.seqs[2 * l + 1];
    for (std::size_t m = 0; m < M; m++) {
      out.push_back(seq_add(pkron(a_odd, bp[2 * m]), pkron(a_even, bp[2 * m + 1])));
      out.push_back(seq_add(pkron(flip_conj(a_even), bp[2 * m]),
                            neg(pkron(flip_conj(a_odd), bp[2 * m + 1]))));
    }
  }
  return finish(std::move(out), "sum_product_compose", opt);
}

GcsSet quarter_scale_compose(const GcsSet& setA, const GcsSet& setB, const GcsSet& two_phase,
                     const VerifyOptions& opt) {
  if (setA.cardinality() % 2 != 0 || setA.cardinality() == 0 || setB.cardinality() % 2 != 0 ||
      setB.cardinality() == 0)
    fail(Errc::OddCardinality, "quarter_scale_compose: set cardinalities must be even and nonzero");
  require_pair(two_phase, "quarter_scale_compose");
  require_certified(two_phase, "quarter_scale_compose");
  if (!is_two_phase(two_phase))
    fail(Errc::NotTwoPhase, "quarter_scale_compose: scale pair has imaginary entries");
  if (two_phase.n <= 1) fail(Errc::TrivialTwoPhase, "quarter_scale_compose: scale pair must be nontrivial");
  const std::size_t s = setA.seqs[0].size();
  for (const auto& a : setA.seqs)
    if (a.size() != s) fail(Errc::LengthMismatch, "quarter_scale_compose: setA lengths differ");
  const std::size_t tlen = setB.seqs[0].size();
  for (const auto& b : setB.seqs)
    if (b.size() != tlen) fail(Errc::LengthMismatch, "quarter_scale_compose: setB lengths differ");

  auto [p, q] = quarter_pq(two_phase.seqs[0], two_phase.seqs[1]);
  std::vector<QSeq> bprime;
  bprime.reserve(setB.cardinality());
  for (std::size_t m = 0; m < setB.cardinality() / 2; m++) {
    const QSeq& b_odd = setB.seqs[2 * m];
    const QSeq& b_even = setB.seqs[2 * m + 1];
    bprime.push_back(seq_add(pkron(p, b_odd), pkron(q, b_even)));
    bprime.push_back(seq_add(pkron(flip_conj(q), b_odd), neg(pkron(flip_conj(p), b_even))));
  }
  std::vector<QSeq> out;
  out.reserve(setA.cardinality() * bprime.size() / 2);
  for (std::size_t l = 0; l < setA.cardinality() / 2; l++) {
    const QSeq& a_odd = setA.seqs[2 * l];
    const QSeq& a_even = setA.seqs[2 * l + 1];
    for (std::size_t m = 0; m < bprime.size() / 2; m++) {
      out.push_back(seq_add(pkron(a_odd, bprime[2 * m]), pkron(a_even, bprime[2 * m + 1])));
      out.push_back(seq_add(pkron(flip_conj(a_even), bprime[2 * m]),
                            neg(pkron(flip_conj(a_odd), bprime[2 * m + 1]))));
    }
  }
  return finish(std::move(out), "quarter_scale_compose", opt);
}

GcsSet cbs_from_pair(const GcsSet& pair, const VerifyOptions& opt) {
  require_pair(pair, "cbs_from_pair");
  require_certified(pair, "cbs_from_pair");
  const QSeq& a = pair.seqs[0];
  const QSeq& b = pair.seqs[1];
  QSeq a_plus = a, a_minus = a;
  a_plus.push_back(kOne);
  a_minus.push_back(-kOne);
  GcsSet out = finish({a_plus, a_minus, b, b}, "cbs_from_pair", opt);
  out.is_cbs = true;
  out.cbs_s1 = a.size() + 1;
  out.cbs_s2 = a.size();
  return out;
}

GcsSet cbs_from_pairs(const GcsSet& pair_s1, const GcsSet& pair_s2, const VerifyOptions& opt) {
  require_pair(pair_s1, "cbs_from_pairs");
  require_certified(pair_s1, "cbs_from_pairs");
  if (pair_s2.cardinality() != 2)
    fail(Errc::NotPair, "cbs_from_pairs: second input must be a pair (possibly empty)");
  GcsSet out = finish(
      {pair_s1.seqs[0], pair_s1.seqs[1], pair_s2.seqs[0], pair_s2.seqs[1]}, "cbs_from_pairs", opt);
  out.is_cbs = true;
  out.cbs_s1 = pair_s1.seqs[0].size();
  out.cbs_s2 = pair_s2.seqs[0].size();
  out.pair_split = true;
  return out;
}

GcsSet cbs_seed_87() {
  GcsSet out = make_certified({seq_of({-1, 1, 1, 1, 1, 1, -1, 1}), seq_of({1, 1, 1, -1, -1, 1, -1, 1}),
                               seq_of({-1, 1, 1, -1, 1, 1, 1}), seq_of({1, -1, 1, 1, 1, -1, -1})},
                              "cbs_seed_87");
  out.is_cbs = true;
  out.cbs_s1 = 8;
  out.cbs_s2 = 7;
  return out;
}

GcsSet yang_compose(const GcsSet& cbs, const GcsSet* pair1, const GcsSet* pair2, YangRoute route,
                    const VerifyOptions& opt) {
  if (!cbs.is_cbs || cbs.cardinality() != 4)
    fail(Errc::ShapeMismatch, "yang_compose: first input must carry CBS metadata");
  require_certified(cbs, "yang_compose");
  const QSeq& a = cbs.seqs[0];
  const QSeq& b = cbs.seqs[1];
  const QSeq& c = cbs.seqs[2];
  const QSeq& d = cbs.seqs[3];
  const std::uint64_t s1 = cbs.cbs_s1, s2 = cbs.cbs_s2;

  std::vector<QSeq> out;
  if (route == YangRoute::kInterleave) {
    if (s1 != s2 + 1)
      fail(Errc::ShapeMismatch, "yang_compose interleave: need CBS(s2+1, s2), got CBS(" +
                                    std::to_string(s1) + "," + std::to_string(s2) + ")");
    out = {interleave(a, zeros(s2)), interleave(zeros(s1), c), interleave(b, zeros(s2)),
           interleave(zeros(s1), d)};
  } else {
    if (pair1 == nullptr || pair2 == nullptr)
      fail(Errc::InvalidArgument, "yang_compose concat: two multiplier pairs required");
    require_pair(*pair1, "yang_compose");
    require_certified(*pair1, "yang_compose");
    require_pair(*pair2, "yang_compose");
    require_certified(*pair2, "yang_compose");
    const QSeq& i = pair1->seqs[0];
    const QSeq& j = pair1->seqs[1];
    const QSeq& k = pair2->seqs[0];
    const QSeq& l = pair2->seqs[1];
    const std::uint64_t t1 = i.size(), t2 = k.size();
    if (t1 != t2 && !cbs.pair_split)
      fail(Errc::RouteConstraintViolated,
           "yang_compose concat: unequal multiplier lengths need a pair-split CBS");
    out = {cat(cat(pkron(a, i), zeros(2 * t2 * s2)), pkron(b, j)),
           cat(cat(cat(zeros(t1 * s1), pkron(c, k)), pkron(d, l)), zeros(t1 * s1)),
           cat(cat(pkron(flip_conj(b), i), zeros(2 * t2 * s2)), pkron(flip_conj(neg(a)), j)),
           cat(cat(cat(zeros(t1 * s1), pkron(flip_conj(d), k)), pkron(flip_conj(neg(c)), l)),
               zeros(t1 * s1))};
  }
  // intermediate order [e, f, g, h]
  return finish(std::move(out), "yang_compose", opt);
}

GcsSet yang_combine(const GcsSet& q1, const GcsSet& q2, const VerifyOptions& opt) {
  if (q1.cardinality() != 4 || q2.cardinality() != 4)
    fail(Errc::ShapeMismatch, "yang_combine: inputs must be intermediate quads");
  require_certified(q1, "yang_combine");
  require_certified(q2, "yang_combine");
  const QSeq& e1 = q1.seqs[0];
  const QSeq& f1 = q1.seqs[1];
  const QSeq& g1 = q1.seqs[2];
  const QSeq& h1 = q1.seqs[3];
  const QSeq& e2 = q2.seqs[0];
  const QSeq& f2 = q2.seqs[1];
  const QSeq& g2 = q2.seqs[2];
  const QSeq& h2 = q2.seqs[3];
  const QSeq p = seq_add(seq_add(pkron(e1, flip_conj(f2)), neg(pkron(flip_conj(g1), e2))),
                         seq_add(pkron(f1, g2), pkron(h1, h2)));
  const QSeq q = seq_add(seq_add(pkron(flip_conj(e1), e2), pkron(g1, flip_conj(f2))),
                         seq_add(neg(pkron(f1, flip_conj(h2))), pkron(h1, flip_conj(g2))));
  const QSeq r = seq_add(seq_add(pkron(flip_conj(f1), e2), neg(pkron(h1, f2))),
                         seq_add(pkron(e1, flip_conj(h2)), pkron(g1, g2)));
  const QSeq s = seq_add(seq_add(neg(pkron(f1, f2)), neg(pkron(flip_conj(h1), e2))),
                         seq_add(pkron(e1, flip_conj(g2)), neg(pkron(g1, h2))));
  GcsSet out = finish({p, q, r, s}, "yang_combine", opt);
  out.is_cbs = true;
  out.cbs_s1 = out.cbs_s2 = q1.n * q2.n;
  return out;
}

std::vector<GcsSet> load_base_corpus(const std::string& path, std::vector<std::string>* rejects) {
  std::vector<GcsSet> out;
  std::size_t idx = 0;
  for (auto& record : io::read_corpus_records(path)) {
    idx++;
    GcsSet set;
    set.seqs = std::move(record);
    for (const auto& s : set.seqs) set.n = std::max(set.n, s.size());
    std::string why;
    if (set.cardinality() != 4) {
      why = "expected 4 sequences";
    } else {
      const std::size_t s1 = set.seqs[0].size();
      const std::size_t s2 = set.seqs[2].size();
      if (set.seqs[1].size() != s1 || set.seqs[3].size() != s2 || s1 != s2 + 1) {
        why = "lengths are not (b+1, b+1, b, b)";
      } else {
        VerifyReport rep = verify_gcs_set(set.seqs);
        if (!rep.ok) {
          why = rep.describe();
        } else {
          set.weight_sum = rep.weight_sum;
          set.certified = true;
          set.is_cbs = true;
          set.cbs_s1 = s1;
          set.cbs_s2 = s2;
          out.push_back(std::move(set));
          continue;
        }
      }
    }
    if (rejects) rejects->push_back("record " + std::to_string(idx) + ": " + why);
  }
  return out;
}

// ---- planner ----

Builder::Builder(BuildConfig cfg) : cfg_(std::move(cfg)) {
  P_ = cfg_.P_override ? cfg_.P_override : choose_P(cfg_.verified_bound);
  if (!cfg_.corpus_path.empty()) {
    for (auto& set : load_base_corpus(cfg_.corpus_path, &corpus_rejects_)) {
      const std::uint64_t b = set.cbs_s2;
      corpus_.emplace(b, std::move(set));
    }
  }
}

void Builder::ensure_avail(std::uint64_t bound) {
  bound = std::max(bound, P_);
  if (bound <= avail_bound_) return;
  s1_ = enumerate_S1(bound);
  golay_members_ = s1_.members(1);
  g2_ = square_set(s1_, bound);

  LengthSet b_avail(bound);
  for (std::uint64_t g : golay_members_)
    if (2 * g + 1 <= bound) b_avail.set(2 * g + 1);
  if (15 <= bound) b_avail.set(15);
  for (const auto& [b, set] : corpus_)
    if (2 * b + 1 <= bound) b_avail.set(2 * b + 1);
  avail_ = build_dense_sets_with(b_avail, bound);

  s2_plain_ = product_set(s1_, sum_set(s1_, s1_, bound), bound);
  s2_plain_.set(0);
  s2d_avail_ = s2_plain_;
  s2d_avail_.or_with(avail_.E);
  s2d_avail_.or_with(avail_.F);
  s2d_avail_.or_with(product_set(s1_, avail_.B, bound));
  s2d_avail_.or_with(scale_set(product_set(s1_, avail_.F, bound), 2, bound));
  avail_bound_ = bound;
}

std::optional<Built> Builder::try_pair(std::uint64_t n) {
  if (auto it = pair_cache_.find(n); it != pair_cache_.end()) return it->second;
  auto exps = golay_membership(n);
  if (!exps) return std::nullopt;

  Built built;
  switch (n) {
    case 1:
      built = {trivial_pair(), leaf_plan("trivial", 1, 2)};
      pair_cache_[n] = built;
      return built;
    case 2:
    case 3:
    case 5:
    case 10:
    case 11:
    case 13:
    case 26: {
      Plan p = leaf_plan("seed", n, 2);
      p.length = n;
      built = {seed_pair(n), p};
      pair_cache_[n] = built;
      return built;
    }
    default:
      break;
  }

  // split the exponent of 2 into plain doublings and 10/26 kernels, then
  // fold the odd seeds in with one 2-phase factor per composition
  const int u5 = std::min(exps->c5, exps->u);
  const int u26 = exps->u - u5;
  std::vector<std::uint64_t> factors;
  factors.insert(factors.end(), static_cast<std::size_t>(exps->a), 2);
  factors.insert(factors.end(), static_cast<std::size_t>(u5), 10);
  factors.insert(factors.end(), static_cast<std::size_t>(u26), 26);
  std::vector<std::uint64_t> odd_seeds;
  odd_seeds.insert(odd_seeds.end(), static_cast<std::size_t>(exps->b3), 3);
  odd_seeds.insert(odd_seeds.end(), static_cast<std::size_t>(exps->c5 - u5), 5);
  odd_seeds.insert(odd_seeds.end(), static_cast<std::size_t>(exps->d11), 11);
  odd_seeds.insert(odd_seeds.end(), static_cast<std::size_t>(exps->e13 - u26), 13);
  if (odd_seeds.size() > factors.size() + 1) return std::nullopt;  // rule guarantees otherwise

  std::vector<Built> stack;
  for (std::uint64_t s : odd_seeds) {
    Plan p = leaf_plan("seed", s, 2);
    p.length = s;
    stack.push_back({seed_pair(s), p});
  }
  while (stack.size() < factors.size() + 1)
    stack.push_back({trivial_pair(), leaf_plan("trivial", 1, 2)});

  for (std::uint64_t fac : factors) {
    Built t = stack[0];
    Built u = stack[1];
    GcsSet sp = seed_pair(fac);
    GcsSet merged = craigen_compose(sp, t.set, u.set, cfg_.verify);
    Plan plan;
    plan.kind = "craigen";
    plan.seed_id = std::to_string(fac);
    plan.expect_len = fac * t.set.n * u.set.n;
    plan.expect_card = 2;
    plan.children = {std::move(t.plan), std::move(u.plan)};
    stack.erase(stack.begin(), stack.begin() + 2);
    stack.insert(stack.begin(), Built{std::move(merged), std::move(plan)});
  }
  if (stack.size() != 1 || stack[0].set.n != n) return std::nullopt;
  pair_cache_[n] = stack[0];
  return stack[0];
}

Built Builder::pair(std::uint64_t n) {
  auto b = try_pair(n);
  if (!b)
    fail(Errc::UnsupportedLength, std::to_string(n) + " is not a 4-phase pair length");
  return *b;
}

std::optional<Built> Builder::try_cbs_for_b(std::uint64_t b) {
  if (b >= 1 && s1_.test(b)) {
    auto pr = try_pair(b);
    if (pr) {
      GcsSet set = cbs_from_pair(pr->set, cfg_.verify);
      Plan plan;
      plan.kind = "cbs_from_pair";
      plan.expect_len = b + 1;
      plan.expect_card = 4;
      plan.children = {std::move(pr->plan)};
      return Built{std::move(set), std::move(plan)};
    }
  }
  if (b == 7) {
    Plan plan = leaf_plan("cbs_seed", 8, 4);
    plan.seed_id = "87";
    plan.t = 8;
    plan.u = 7;
    return Built{cbs_seed_87(), std::move(plan)};
  }
  if (auto it = corpus_.find(b); it != corpus_.end()) {
    Plan plan = leaf_plan("cbs_seed", b + 1, 4);
    plan.seed_id = "corpus:" + std::to_string(b);
    plan.t = b + 1;
    plan.u = b;
    return Built{it->second, std::move(plan)};
  }
  return std::nullopt;
}

namespace {

// B-set of a quad request: CBS members interleaved as (s1, s2) grouping
GcsSet interleave_sets(const GcsSet& x, const GcsSet& y) {
  GcsSet b;
  for (std::size_t m = 0; m < x.cardinality(); m++) {
    b.seqs.push_back(x.seqs[m]);
    b.seqs.push_back(y.seqs[m]);
  }
  b.n = std::max(x.n, y.n);
  b.certified = x.certified && y.certified;
  return b;
}

GcsSet cbs_as_bset(const GcsSet& cbs) {
  GcsSet b;
  b.seqs = {cbs.seqs[0], cbs.seqs[2], cbs.seqs[1], cbs.seqs[3]};
  b.n = cbs.n;
  b.certified = cbs.certified;
  return b;
}

GcsSet empty_set(std::size_t card) {
  GcsSet s;
  s.seqs.assign(card, QSeq{});
  s.n = 0;
  s.weight_sum = 0;
  s.certified = true;
  return s;
}

}  // namespace

std::optional<Built> Builder::try_intermediate(std::uint64_t e) {
  ensure_avail(e);
  // interleave on a CBS(b+1, b)
  if (e % 2 == 1 && avail_.B.test(e)) {
    if (auto cb = try_cbs_for_b((e - 1) / 2)) {
      GcsSet set = yang_compose(cb->set, nullptr, nullptr, YangRoute::kInterleave, cfg_.verify);
      Plan plan;
      plan.kind = "yang";
      plan.route = "interleave";
      plan.expect_len = e;
      plan.expect_card = 4;
      plan.children = {std::move(cb->plan)};
      return Built{std::move(set), std::move(plan)};
    }
  }
  if (e % 2 != 0) return std::nullopt;
  const std::uint64_t h = e / 2;

  auto concat_plan = [&](Built cb, Built p1, Built p2) -> Built {
    GcsSet set = yang_compose(cb.set, &p1.set, &p2.set, YangRoute::kConcat, cfg_.verify);
    Plan plan;
    plan.kind = "yang";
    plan.route = "concat";
    plan.expect_len = e;
    plan.expect_card = 4;
    plan.children = {std::move(cb.plan), std::move(p1.plan), std::move(p2.plan)};
    return Built{std::move(set), std::move(plan)};
  };

  // concat on a CBS(b+1, b) with equal multipliers g: e = 2g(2b+1)
  for (std::uint64_t g : golay_divisors(h, golay_members_)) {
    const std::uint64_t m = h / g;
    if (m % 2 == 1 && avail_.B.test(m)) {
      if (auto cb = try_cbs_for_b((m - 1) / 2)) {
        auto pg = try_pair(g);
        if (pg) return concat_plan(std::move(*cb), *pg, *pg);
      }
    }
  }

  // concat on a pair-split CBS: h = s1*t1 + s2*t2 with every part a pair
  // length (second part possibly absent)
  auto split_product = [&](std::uint64_t v) -> std::optional<std::pair<std::uint64_t, std::uint64_t>> {
    for (std::uint64_t s : golay_divisors(v, golay_members_))
      if (golay_membership(v / s)) return std::make_pair(s, v / s);
    return std::nullopt;
  };
  for (std::uint64_t p1v : g2_.members(1)) {
    if (p1v > h) break;
    const std::uint64_t rem = h - p1v;
    if (rem != 0 && !g2_.test(rem)) continue;
    if (rem > p1v) continue;  // keep s1*t1 >= s2*t2 for a canonical witness
    auto sp1 = split_product(p1v);
    if (!sp1) continue;
    auto pa = try_pair(sp1->first);
    auto pt1 = try_pair(sp1->second);
    if (!pa || !pt1) continue;
    if (rem == 0) {
      GcsSet cbs = cbs_from_pairs(pa->set, empty_set(2), cfg_.verify);
      Plan cplan;
      cplan.kind = "cbs_from_pair";
      cplan.expect_len = sp1->first;
      cplan.expect_card = 4;
      cplan.children = {pa->plan, leaf_plan("trivial", 1, 2)};
      // degenerate second half: the trivial child only records provenance of
      // the empty slot; arithmetic uses the recorded (s1, 0) grouping
      cplan.t = sp1->first;
      cplan.u = 0;
      Built cb{std::move(cbs), std::move(cplan)};
      auto ptriv = try_pair(1);
      return concat_plan(std::move(cb), std::move(*pt1), std::move(*ptriv));
    }
    auto sp2 = split_product(rem);
    if (!sp2) continue;
    auto pb = try_pair(sp2->first);
    auto pt2 = try_pair(sp2->second);
    if (!pb || !pt2) continue;
    GcsSet cbs = cbs_from_pairs(pa->set, pb->set, cfg_.verify);
    Plan cplan;
    cplan.kind = "cbs_from_pair";
    cplan.expect_len = std::max(sp1->first, sp2->first);
    cplan.expect_card = 4;
    cplan.children = {pa->plan, pb->plan};
    cplan.t = sp1->first;
    cplan.u = sp2->first;
    Built cb{std::move(cbs), std::move(cplan)};
    return concat_plan(std::move(cb), std::move(*pt1), std::move(*pt2));
  }

  // concat on an equal CBS(f, f): e = 4gf
  if (e % 4 == 0) {
    for (std::uint64_t g : golay_divisors(e / 4, golay_members_)) {
      const std::uint64_t f = e / 4 / g;
      if (f <= avail_.F.bound() && avail_.F.test(f)) {
        if (auto cf = try_cbs_ff(f)) {
          auto pg = try_pair(g);
          if (pg) return concat_plan(std::move(*cf), *pg, *pg);
        }
      }
    }
  }
  return std::nullopt;
}

std::optional<Built> Builder::try_cbs_ff(std::uint64_t f) {
  ensure_avail(f);
  for (std::uint64_t e1 : avail_.E.members(1)) {
    if (e1 * e1 > f) break;
    if (f % e1 != 0) continue;
    const std::uint64_t e2 = f / e1;
    if (e2 > avail_.E.bound() || !avail_.E.test(e2)) continue;
    auto q1 = try_intermediate(e1);
    if (!q1) continue;
    auto q2 = try_intermediate(e2);
    if (!q2) continue;
    GcsSet set = yang_combine(q1->set, q2->set, cfg_.verify);
    Plan plan;
    plan.kind = "yang";
    plan.route = "combine";
    plan.expect_len = f;
    plan.expect_card = 4;
    plan.children = {std::move(q1->plan), std::move(q2->plan)};
    return Built{std::move(set), std::move(plan)};
  }
  return std::nullopt;
}

std::optional<Built> Builder::try_quad(std::uint64_t n) {
  ensure_avail(n);
  std::vector<Built> candidates;

  auto sumprod_wrap = [&](Built a, Built x, std::optional<Built> y, std::uint64_t t,
                       std::uint64_t u) -> Built {
    GcsSet bset = y ? interleave_sets(x.set, y->set) : interleave_sets(x.set, empty_set(x.set.cardinality()));
    GcsSet set = sum_product_compose(a.set, bset, t, u, cfg_.verify);
    Plan plan;
    plan.kind = "sumprod";
    plan.t = t;
    plan.u = u;
    plan.expect_len = a.set.n * (t + u);
    plan.expect_card = a.set.cardinality() * x.set.cardinality();
    plan.children = {std::move(a.plan), std::move(x.plan)};
    if (y) plan.children.push_back(std::move(y->plan));
    return Built{std::move(set), std::move(plan)};
  };

  // interleave intermediate (odd lengths from the base catalog)
  if (n % 2 == 1 && avail_.B.test(n)) {
    if (auto q = try_intermediate(n)) candidates.push_back(std::move(*q));
  }
  // plain two-pair witness n = s(t+u)
  if (auto w = s2_witness(n, s1_)) {
    auto pa = try_pair(w->s);
    auto pt = try_pair(w->t);
    if (pa && pt) {
      if (w->u == 0) {
        candidates.push_back(sumprod_wrap(std::move(*pa), std::move(*pt), std::nullopt, w->t, 0));
      } else if (auto pu = try_pair(w->u)) {
        candidates.push_back(
            sumprod_wrap(std::move(*pa), std::move(*pt), std::move(*pu), w->t, w->u));
      }
    }
  }
  // pair times base CBS: n = g(2b+1)
  for (std::uint64_t g : golay_divisors(n, golay_members_)) {
    const std::uint64_t m = n / g;
    if (m % 2 == 1 && m >= 3 && avail_.B.test(m)) {
      if (auto cb = try_cbs_for_b((m - 1) / 2)) {
        auto pg = try_pair(g);
        if (pg) {
          GcsSet bset = cbs_as_bset(cb->set);
          GcsSet set = sum_product_compose(pg->set, bset, cb->set.cbs_s1, cb->set.cbs_s2, cfg_.verify);
          Plan plan;
          plan.kind = "sumprod";
          plan.t = cb->set.cbs_s1;
          plan.u = cb->set.cbs_s2;
          plan.expect_len = g * m;
          plan.expect_card = 4;
          plan.children = {std::move(pg->plan), std::move(cb->plan)};
          // CBS child supplies both groupings; no separate third child
          candidates.push_back(Built{std::move(set), std::move(plan)});
          break;
        }
      }
    }
  }
  // pair times equal CBS: n = 2gf
  if (n % 2 == 0) {
    for (std::uint64_t g : golay_divisors(n / 2, golay_members_)) {
      const std::uint64_t f = n / 2 / g;
      if (f <= avail_.F.bound() && avail_.F.test(f)) {
        if (auto cf = try_cbs_ff(f)) {
          auto pg = try_pair(g);
          if (pg) {
            GcsSet bset = cbs_as_bset(cf->set);
            GcsSet set = sum_product_compose(pg->set, bset, f, f, cfg_.verify);
            Plan plan;
            plan.kind = "sumprod";
            plan.t = f;
            plan.u = f;
            plan.expect_len = n;
            plan.expect_card = 4;
            plan.children = {std::move(pg->plan), std::move(cf->plan)};
            candidates.push_back(Built{std::move(set), std::move(plan)});
            break;
          }
        }
      }
    }
  }
  // concat intermediate (even lengths in E)
  if (n % 2 == 0 && n <= avail_.E.bound() && avail_.E.test(n)) {
    if (auto q = try_intermediate(n)) candidates.push_back(std::move(*q));
  }
  // equal CBS itself
  if (n <= avail_.F.bound() && avail_.F.test(n)) {
    if (auto q = try_cbs_ff(n)) candidates.push_back(std::move(*q));
  }

  if (candidates.empty()) return std::nullopt;
  // Prefer sets with no zero entries: downstream array constructions need
  // every cell filled, and interleaved intermediates are only half dense.
  // Tie-break (and fallback) by plan size.
  const auto dense = [](const Built& b) {
    for (const auto& s : b.set.seqs)
      if (!is_zero_free(s)) return false;
    return true;
  };
  std::size_t best = candidates.size();
  std::size_t best_nodes = 0;
  bool best_dense = false;
  for (std::size_t i = 0; i < candidates.size(); i++) {
    const bool d = dense(candidates[i]);
    const std::size_t nodes = candidates[i].plan.node_count();
    if (best == candidates.size() || (d && !best_dense) ||
        (d == best_dense && nodes < best_nodes)) {
      best = i;
      best_nodes = nodes;
      best_dense = d;
    }
  }
  return std::move(candidates[best]);
}

Built Builder::quad(std::uint64_t n) {
  auto b = try_quad(n);
  if (!b) fail(Errc::UnsupportedLength, "no quad construction for length " + std::to_string(n));
  return *b;
}

std::optional<Built> Builder::try_octet(std::uint64_t n) {
  ensure_avail(n);
  for (std::uint64_t g : golay_divisors(n, golay_members_)) {
    const std::uint64_t m = n / g;
    // y ascending from 0, x = m - y; lexicographically first (g, y)
    for (std::uint64_t y = 0; 2 * y <= m; y++) {
      if (y != 0 && !(y <= s2d_avail_.bound() && s2d_avail_.test(y))) continue;
      const std::uint64_t x = m - y;
      if (!(x >= 1 && x <= s2d_avail_.bound() && s2d_avail_.test(x))) continue;
      auto qx = try_quad(x);
      if (!qx) continue;
      std::optional<Built> qy;
      if (y != 0) {
        qy = try_quad(y);
        if (!qy) continue;
      }
      auto pg = try_pair(g);
      if (!pg) continue;
      GcsSet bset = qy ? interleave_sets(qx->set, qy->set)
                       : interleave_sets(qx->set, empty_set(qx->set.cardinality()));
      GcsSet set = sum_product_compose(pg->set, bset, x, y, cfg_.verify);
      Plan plan;
      plan.kind = "sumprod";
      plan.t = x;
      plan.u = y;
      plan.expect_len = n;
      plan.expect_card = 8;
      plan.children = {std::move(pg->plan), std::move(qx->plan)};
      if (qy) plan.children.push_back(std::move(qy->plan));
      return Built{std::move(set), std::move(plan)};
    }
  }
  return std::nullopt;
}

Built Builder::octet(std::uint64_t n) {
  auto b = try_octet(n);
  if (!b) fail(Errc::UnsupportedLength, "no octet construction for length " + std::to_string(n));
  return *b;
}

Built Builder::any_set(std::uint64_t n) {
  if (n == 0) fail(Errc::InvalidArgument, "any_set: length must be positive");
  if (auto p = try_pair(n)) return *p;
  if (auto q = try_quad(n)) return *q;
  if (auto o = try_octet(n)) return *o;
  fail(Errc::UnsupportedLength, "no construction found for length " + std::to_string(n));
}

Built Builder::cbs(std::uint64_t s1, std::uint64_t s2) {
  if (s1 < s2) fail(Errc::InvalidArgument, "cbs: require s1 >= s2");
  ensure_avail(std::max(s1, std::uint64_t{1}));
  if (s1 == s2 + 1) {
    if (auto cb = try_cbs_for_b(s2)) return *cb;
  }
  if (golay_membership(s1) && (s2 == 0 || golay_membership(s2))) {
    auto p1 = try_pair(s1);
    if (p1) {
      std::optional<Built> p2;
      if (s2 != 0) p2 = try_pair(s2);
      if (s2 == 0 || p2) {
        GcsSet set = cbs_from_pairs(p1->set, s2 == 0 ? empty_set(2) : p2->set, cfg_.verify);
        Plan plan;
        plan.kind = "cbs_from_pair";
        plan.expect_len = s1;
        plan.expect_card = 4;
        plan.children = {std::move(p1->plan)};
        plan.children.push_back(s2 == 0 ? leaf_plan("trivial", 1, 2) : std::move(p2->plan));
        plan.t = s1;
        plan.u = s2;
        return Built{std::move(set), std::move(plan)};
      }
    }
  }
  if (s1 == s2) {
    if (auto cf = try_cbs_ff(s1)) return *cf;
  }
  fail(Errc::UnsupportedLength,
       "no CBS(" + std::to_string(s1) + ", " + std::to_string(s2) + ") construction available");
}

Built Builder::scale_by_P(Built in, int times) {
  // factor P = base * g with base the largest 2-phase kernel dividing it
  std::uint64_t base = 0, g = 0;
  for (std::uint64_t cand : {std::uint64_t{26}, std::uint64_t{10}, std::uint64_t{2}}) {
    if (P_ % cand == 0 && golay_membership(P_ / cand)) {
      base = cand;
      g = P_ / cand;
      break;
    }
  }
  if (base == 0)
    fail(Errc::UnsupportedLength, "scale factor " + std::to_string(P_) + " is not in {2,10,26}*S1");
  for (int k = 0; k < times; k++) {
    Built pg = pair(g);
    GcsSet scaled = quarter_scale_compose(pg.set, in.set, seed_pair(base), cfg_.verify);
    Plan plan;
    plan.kind = "scale";
    plan.factor = P_;
    plan.factor_base = base;
    plan.factor_g = g;
    plan.expect_len = in.plan.expect_len * P_;
    plan.expect_card = in.plan.expect_card;
    plan.children = {std::move(in.plan)};
    in = Built{std::move(scaled), std::move(plan)};
  }
  return in;
}

Built Builder::build_arbitrary(std::uint64_t n) {
  if (n == 0) fail(Errc::InvalidArgument, "build_arbitrary: length must be positive");
  // base-P digits, ascending power
  std::vector<std::pair<std::uint64_t, std::uint64_t>> digits;  // (value, power)
  std::uint64_t rest = n;
  for (std::uint64_t pow = 0; rest != 0; pow++) {
    const std::uint64_t d = rest % P_;
    if (d != 0) digits.emplace_back(d, pow);
    rest /= P_;
  }

  std::vector<Built> parts;
  for (const auto& [val, pow] : digits) {
    std::optional<Built> base;
    if (auto p = try_pair(val))
      base = std::move(p);
    else if (auto q = try_quad(val))
      base = std::move(q);
    else if (auto o = try_octet(val))
      base = std::move(o);
    if (!base)
      fail(Errc::DigitNotCovered, "digit " + std::to_string(val) + " at power " +
                                      std::to_string(pow) + " (base " + std::to_string(P_) +
                                      ") is not locally covered");
    parts.push_back(scale_by_P(std::move(*base), static_cast<int>(pow)));
  }

  if (parts.size() == 1) {
    check_plan_arithmetic(parts[0].plan);
    return std::move(parts[0]);
  }

  // pad cardinalities with all-zero members (inert in every correlation sum,
  // but length-matched so the merge grouping stays consistent), then pad the
  // set count to a power of two with empty sets and merge pairwise
  std::size_t kmax = 0;
  for (const auto& p : parts) kmax = std::max(kmax, p.set.cardinality());
  for (auto& p : parts)
    while (p.set.cardinality() < kmax) p.set.seqs.push_back(zeros(p.set.n));
  const std::uint64_t r = parts.size();
  const std::uint64_t eta = next_pow2(r);

  Plan hier;
  hier.kind = "hier";
  hier.P = P_;
  hier.pad_sets = eta - r;
  for (const auto& [val, pow] : digits) {
    hier.digit_vals.push_back(val);
    hier.digit_pows.push_back(pow);
  }
  for (auto& p : parts) hier.children.push_back(p.plan);
  hier.expect_len = n;
  hier.expect_card = kmax * eta;

  std::vector<GcsSet> work;
  work.reserve(eta);
  for (auto& p : parts) work.push_back(std::move(p.set));
  for (std::uint64_t i = r; i < eta; i++) work.push_back(empty_set(kmax));

  while (work.size() > 1) {
    std::vector<GcsSet> next;
    for (std::size_t i = 0; i + 1 < work.size(); i += 2) {
      const std::uint64_t t = work[i].n, u = work[i + 1].n;
      GcsSet bset = interleave_sets(work[i], work[i + 1]);
      next.push_back(sum_product_compose(trivial_pair(), bset, t, u, cfg_.verify));
    }
    work = std::move(next);
  }

  if (work[0].n != n)
    fail(Errc::PlanArithmeticMismatch, "hierarchy produced length " + std::to_string(work[0].n) +
                                           ", expected " + std::to_string(n));
  check_plan_arithmetic(hier);
  return Built{std::move(work[0]), std::move(hier)};
}

}  // namespace gcs
