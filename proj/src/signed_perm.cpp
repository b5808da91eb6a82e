#include "gcs/signed_perm.hpp"

#include <algorithm>
#include <string>

#include "gcs/error.hpp"

namespace gcs {

namespace {

void require_same_order(std::uint32_t a, std::uint32_t b, const char* where) {
  if (a != b)
    fail(Errc::OrderMismatch, std::string(where) + ": orders " + std::to_string(a) + " and " +
                                  std::to_string(b) + " differ");
}

}  // namespace

SignedPerm sp_identity(std::uint32_t v) {
  SignedPerm x;
  x.v = v;
  x.image.resize(v);
  for (std::uint32_t c = 0; c < v; c++) x.image[c] = c;
  x.sign.assign(v, 1);
  return x;
}

bool sp_valid(const SignedPerm& x) {
  if (x.image.size() != x.v || x.sign.size() != x.v) return false;
  std::vector<bool> seen(x.v, false);
  for (std::uint32_t c = 0; c < x.v; c++) {
    if (x.image[c] >= x.v || seen[x.image[c]]) return false;
    seen[x.image[c]] = true;
    if (x.sign[c] != 1 && x.sign[c] != -1) return false;
  }
  return true;
}

SignedPerm sp_mul(const SignedPerm& x, const SignedPerm& y) {
  require_same_order(x.v, y.v, "sp_mul");
  SignedPerm z;
  z.v = x.v;
  z.image.resize(z.v);
  z.sign.resize(z.v);
  for (std::uint32_t c = 0; c < z.v; c++) {
    z.image[c] = x.image[y.image[c]];
    z.sign[c] = static_cast<std::int8_t>(y.sign[c] * x.sign[y.image[c]]);
  }
  return z;
}

SignedPerm sp_neg(const SignedPerm& x) {
  SignedPerm z = x;
  for (auto& s : z.sign) s = static_cast<std::int8_t>(-s);
  return z;
}

SignedPerm sp_transpose(const SignedPerm& x) {
  SignedPerm z;
  z.v = x.v;
  z.image.resize(z.v);
  z.sign.resize(z.v);
  for (std::uint32_t c = 0; c < x.v; c++) {
    z.image[x.image[c]] = c;
    z.sign[x.image[c]] = x.sign[c];
  }
  return z;
}

SignedPerm rep2(GaussInt z) {
  SignedPerm r;
  r.v = 2;
  if (z == kOne || z == -kOne) {
    r.image = {0, 1};
    const std::int8_t s = z == kOne ? 1 : -1;
    r.sign = {s, s};
  } else if (z == kImag || z == -kImag) {
    r.image = {1, 0};
    if (z == kImag)
      r.sign = {1, -1};
    else
      r.sign = {-1, 1};
  } else {
    fail(Errc::InvalidArgument, "rep2: entry " + z.to_string() + " is not a unit");
  }
  return r;
}

SignedPerm sp_embed(const SignedPerm& x) {
  SignedPerm z;
  z.v = 2 * x.v;
  z.image.reserve(z.v);
  z.sign.reserve(z.v);
  for (std::uint32_t c = 0; c < x.v; c++) z.image.push_back(x.image[c]);
  for (std::uint32_t c = 0; c < x.v; c++) z.image.push_back(x.v + x.image[c]);
  for (int rep = 0; rep < 2; rep++)
    for (std::uint32_t c = 0; c < x.v; c++) z.sign.push_back(x.sign[c]);
  return z;
}

SignedPerm sp_embed_to(SignedPerm x, std::uint32_t v) {
  while (x.v < v) x = sp_embed(x);
  require_same_order(x.v, v, "sp_embed_to");
  return x;
}

SignedPerm sp_block_diag(const SignedPerm& a, const SignedPerm& b) {
  require_same_order(a.v, b.v, "sp_block_diag");
  SignedPerm z;
  z.v = 2 * a.v;
  for (std::uint32_t c = 0; c < a.v; c++) {
    z.image.push_back(a.image[c]);
    z.sign.push_back(a.sign[c]);
  }
  for (std::uint32_t c = 0; c < b.v; c++) {
    z.image.push_back(a.v + b.image[c]);
    z.sign.push_back(b.sign[c]);
  }
  return z;
}

SignedPerm sp_anti_diag(const SignedPerm& tr, const SignedPerm& bl) {
  require_same_order(tr.v, bl.v, "sp_anti_diag");
  SignedPerm z;
  z.v = 2 * tr.v;
  for (std::uint32_t c = 0; c < bl.v; c++) {
    z.image.push_back(tr.v + bl.image[c]);
    z.sign.push_back(bl.sign[c]);
  }
  for (std::uint32_t c = 0; c < tr.v; c++) {
    z.image.push_back(tr.image[c]);
    z.sign.push_back(tr.sign[c]);
  }
  return z;
}

bool SPSeq::quasi_symmetric() const {
  const std::size_t n = entries.size();
  for (std::size_t i = 0; i < n; i++)
    if (entries[i].has_value() != entries[n - 1 - i].has_value()) return false;
  return true;
}

SPSeq to_sp2(const QSeq& s) {
  SPSeq out;
  out.v = 2;
  out.entries.reserve(s.size());
  for (auto z : s) {
    if (z.is_zero())
      out.entries.push_back(std::nullopt);
    else
      out.entries.push_back(rep2(z));
  }
  return out;
}

const std::vector<std::int64_t>& MatProfile::at(std::int64_t lag) const {
  return mats.at(static_cast<std::size_t>(lag - lag_min));
}

bool MatProfile::is_zero(std::int64_t lag) const {
  const auto& m = at(lag);
  return std::all_of(m.begin(), m.end(), [](std::int64_t x) { return x == 0; });
}

bool MatProfile::is_scaled_identity(std::int64_t lag, std::int64_t scale) const {
  const auto& m = at(lag);
  for (std::uint32_t r = 0; r < v; r++)
    for (std::uint32_t c = 0; c < v; c++)
      if (m[r * v + c] != (r == c ? scale : 0)) return false;
  return true;
}

MatProfile spseq_corr(const SPSeq& a, const SPSeq& b, CorrMode mode) {
  require_same_order(a.v, b.v, "spseq_corr");
  const std::size_t n = a.size();
  if (mode == CorrMode::kPeriodic && b.size() != n)
    fail(Errc::LengthMismatch, "spseq_corr: periodic mode needs equal lengths");
  MatProfile out;
  out.v = a.v;
  const std::uint32_t v = a.v;
  if (mode == CorrMode::kAperiodic) {
    const std::int64_t nb = static_cast<std::int64_t>(b.size());
    out.lag_min = 1 - nb;
    out.mats.assign(static_cast<std::size_t>(n + b.size() - 1),
                    std::vector<std::int64_t>(static_cast<std::size_t>(v) * v, 0));
    for (std::int64_t tau = out.lag_min; tau < static_cast<std::int64_t>(n); tau++) {
      auto& m = out.mats[static_cast<std::size_t>(tau - out.lag_min)];
      for (std::int64_t i = std::max<std::int64_t>(0, tau);
           i < std::min<std::int64_t>(static_cast<std::int64_t>(n), tau + nb); i++) {
        const auto& ai = a.entries[static_cast<std::size_t>(i)];
        const auto& bj = b.entries[static_cast<std::size_t>(i - tau)];
        if (!ai || !bj) continue;
        const SignedPerm z = sp_mul(*ai, sp_transpose(*bj));
        for (std::uint32_t c = 0; c < v; c++) m[z.image[c] * v + c] += z.sign[c];
      }
    }
  } else {
    out.lag_min = 0;
    out.mats.assign(n, std::vector<std::int64_t>(static_cast<std::size_t>(v) * v, 0));
    for (std::size_t tau = 0; tau < n; tau++) {
      auto& m = out.mats[tau];
      for (std::size_t i = 0; i < n; i++) {
        const auto& ai = a.entries[i];
        const auto& bj = b.entries[(i + n - tau) % n];
        if (!ai || !bj) continue;
        const SignedPerm z = sp_mul(*ai, sp_transpose(*bj));
        for (std::uint32_t c = 0; c < v; c++) m[z.image[c] * v + c] += z.sign[c];
      }
    }
  }
  return out;
}

SPSeq flip_transpose(const SPSeq& a) {
  SPSeq out;
  out.v = a.v;
  out.entries.reserve(a.size());
  for (auto it = a.entries.rbegin(); it != a.entries.rend(); ++it)
    out.entries.push_back(*it ? std::optional<SignedPerm>(sp_transpose(**it)) : std::nullopt);
  return out;
}

SPSeq sp_combine(const SPSeq& a, const SPSeq& b) {
  require_same_order(a.v, b.v, "sp_combine");
  const std::size_t n = a.size();
  if (b.size() != n) fail(Errc::LengthMismatch, "sp_combine: lengths differ");
  for (std::size_t i = 0; i < n; i++)
    if (a.entries[i] && b.entries[i])
      fail(Errc::NotDisjoint, "sp_combine: overlapping support at index " + std::to_string(i));
  if (!a.quasi_symmetric() || !b.quasi_symmetric())
    fail(Errc::NotQuasiSymmetric, "sp_combine: input support not mirror-symmetric");

  for (const SPSeq* s : {&a, &b}) {
    const MatProfile r = spseq_corr(*s, *s, CorrMode::kAperiodic);
    const SPSeq fs = flip_transpose(*s);
    const MatProfile rs = spseq_corr(fs, fs, CorrMode::kAperiodic);
    if (r.mats != rs.mats)
      fail(Errc::FlipCorrMismatch,
           "sp_combine: input does not match its flip-transpose correlation");
  }
  for (std::size_t i = 0; i < n; i++) {
    if (!a.entries[i]) continue;
    for (std::size_t j = 0; j < n; j++) {
      if (!b.entries[j]) continue;
      if (!(sp_mul(*a.entries[i], *b.entries[j]) == sp_mul(*b.entries[j], *a.entries[i])))
        fail(Errc::NonCommutingEntries, "sp_combine: entries " + std::to_string(i) + " and " +
                                            std::to_string(j) + " do not commute");
    }
  }

  SPSeq c;
  c.v = 2 * a.v;
  c.entries.reserve(n);
  for (std::size_t i = 0; i < n; i++) {
    if (a.entries[i]) {
      c.entries.push_back(sp_block_diag(*a.entries[i], sp_transpose(*a.entries[n - 1 - i])));
    } else if (b.entries[i]) {
      c.entries.push_back(
          sp_anti_diag(*b.entries[i], sp_neg(sp_transpose(*b.entries[n - 1 - i]))));
    } else {
      c.entries.push_back(std::nullopt);
    }
  }
  return c;
}

SupRows supplementary_rows(const std::vector<SupPairItem>& pairs,
                          const std::vector<SupCbsItem>& cbs_items) {
  std::vector<std::pair<const QSeq*, const QSeq*>> ef, gh;
  std::vector<std::uint64_t> inc;  // per-row lambda increment

  auto check_pair = [](const GcsSet& s, const char* what) {
    if (s.cardinality() != 2 || s.seqs[0].size() != s.seqs[1].size())
      fail(Errc::ShapeViolation, std::string(what) + " must be a pair of equal lengths");
    if (!s.certified) fail(Errc::NotCertifiedInput, std::string(what) + " is not certified");
  };

  std::uint64_t n = 0;
  for (const auto& item : pairs) {
    check_pair(item.ef, "supplementary_rows: base pair");
    check_pair(item.gh, "supplementary_rows: multiplier pair");
    ef.emplace_back(&item.ef.seqs[0], &item.ef.seqs[1]);
    gh.emplace_back(&item.gh.seqs[0], &item.gh.seqs[1]);
    const std::uint64_t lm = item.ef.seqs[0].size() * item.gh.seqs[0].size();
    inc.push_back(lm);
    n += 4 * lm;
  }
  for (const auto& item : cbs_items) {
    if (item.cbs.cardinality() != 4)
      fail(Errc::ShapeViolation, "supplementary_rows: CBS input must have 4 members");
    if (!item.cbs.certified)
      fail(Errc::NotCertifiedInput, "supplementary_rows: CBS input is not certified");
    check_pair(item.mult1, "supplementary_rows: CBS multiplier");
    check_pair(item.mult2, "supplementary_rows: CBS multiplier");
    const std::uint64_t t = item.mult1.seqs[0].size();
    if (item.mult2.seqs[0].size() != t)
      fail(Errc::ShapeViolation, "supplementary_rows: the two CBS multiplier pairs must share one length");
    const std::uint64_t s1 = item.cbs.seqs[0].size();
    const std::uint64_t s2 = item.cbs.seqs[2].size();
    if (item.cbs.seqs[1].size() != s1 || item.cbs.seqs[3].size() != s2)
      fail(Errc::ShapeViolation, "supplementary_rows: CBS member lengths are not (s1, s1, s2, s2)");
    ef.emplace_back(&item.cbs.seqs[0], &item.cbs.seqs[1]);
    ef.emplace_back(&item.cbs.seqs[2], &item.cbs.seqs[3]);
    gh.emplace_back(&item.mult1.seqs[0], &item.mult1.seqs[1]);
    gh.emplace_back(&item.mult2.seqs[0], &item.mult2.seqs[1]);
    inc.push_back(s1 * t);
    inc.push_back(s2 * t);
    n += 4 * (s1 + s2) * t;
  }
  if (ef.empty()) fail(Errc::ShapeViolation, "supplementary_rows: no input items");

  SupRows out;
  out.n = n;
  out.lambda.push_back(0);
  for (std::uint64_t d : inc) out.lambda.push_back(out.lambda.back() + d);

  auto pk = [](const QSeq& x, const QSeq& y) { return kron(y, x); };
  for (std::size_t i = 0; i < ef.size(); i++) {
    const QSeq& e = *ef[i].first;
    const QSeq& f = *ef[i].second;
    const QSeq& g = *gh[i].first;
    const QSeq& h = *gh[i].second;
    const std::uint64_t lo = out.lambda[i], hi = out.lambda[i + 1];
    QSeq ai = cat(cat(cat(cat(zeros(lo), pk(e, g)), zeros(n - 2 * hi)), pk(f, h)), zeros(lo));
    QSeq bi = cat(cat(cat(cat(zeros(n / 2 - hi), neg(pk(flip_conj(e), h))), zeros(2 * lo)),
                      pk(flip_conj(f), g)),
                  zeros(n / 2 - hi));
    if (ai.size() != n || bi.size() != n)
      fail(Errc::ShapeViolation, "supplementary_rows: internal length bookkeeping failed");
    out.seqs.emplace_back(std::move(ai), std::move(bi));
  }
  return out;
}

std::optional<std::uint64_t> imperfection_lag(const SPSeq& c) {
  const std::uint64_t n = c.size();
  for (const auto& e : c.entries)
    if (!e) return 0;  // a zero entry breaks perfection at lag 0 already
  const MatProfile prof = spseq_corr(c, c, CorrMode::kPeriodic);
  if (!prof.is_scaled_identity(0, static_cast<std::int64_t>(n))) return 0;
  for (std::uint64_t tau = 1; tau < n; tau++)
    if (!prof.is_zero(static_cast<std::int64_t>(tau))) return tau;
  return std::nullopt;
}

SPSeq perfect_from_inputs(const SupRows& rows) {
  if (rows.seqs.empty()) fail(Errc::ShapeViolation, "perfect_from_inputs: no rows");
  std::vector<SPSeq> seqs;
  for (const auto& [a, b] : rows.seqs) {
    seqs.push_back(to_sp2(a));
    seqs.push_back(to_sp2(b));
  }
  SPSeq c = seqs[0];
  for (std::size_t i = 1; i < seqs.size(); i++) {
    SPSeq next;
    next.v = c.v;
    next.entries.reserve(seqs[i].size());
    for (const auto& e : seqs[i].entries)
      next.entries.push_back(e ? std::optional<SignedPerm>(sp_embed_to(*e, c.v)) : std::nullopt);
    c = sp_combine(c, next);
  }
  if (auto bad = imperfection_lag(c))
    fail(Errc::PerfectionFailed, "fold output fails the periodic profile at lag " +
                                     std::to_string(*bad));
  return c;
}

}  // namespace gcs
