#include "gcs/seq.hpp"

#include <algorithm>
#include <thread>

#include "ntt.hpp"

namespace gcs {

bool is_polyphase(const QSeq& a) {
  return std::all_of(a.begin(), a.end(), [](GaussInt v) { return v.is_quarter_phase(); });
}

void require_polyphase(const QSeq& a, const char* where) {
  for (std::size_t i = 0; i < a.size(); i++)
    if (!a[i].is_quarter_phase())
      fail(Errc::NotPolyphase, std::string(where) + ": entry " + std::to_string(i) + " = " +
                                   a[i].to_string() + " outside {0,1,-1,i,-i}");
}

std::int64_t weight(const QSeq& a) {
  std::int64_t w = 0;
  for (auto v : a) w += v.re * v.re + v.im * v.im;
  return w;
}

bool is_zero_free(const QSeq& a) {
  return std::none_of(a.begin(), a.end(), [](GaussInt v) { return v.is_zero(); });
}

QSeq neg(const QSeq& a) {
  QSeq r(a.size());
  for (std::size_t i = 0; i < a.size(); i++) r[i] = -a[i];
  return r;
}

QSeq conj(const QSeq& a) {
  QSeq r(a.size());
  for (std::size_t i = 0; i < a.size(); i++) r[i] = a[i].conj();
  return r;
}

QSeq flip_conj(const QSeq& a) {
  QSeq r(a.size());
  for (std::size_t i = 0; i < a.size(); i++) r[i] = a[a.size() - 1 - i].conj();
  return r;
}

QSeq scalar_mul(GaussInt s, const QSeq& a) {
  QSeq r(a.size());
  for (std::size_t i = 0; i < a.size(); i++) r[i] = s * a[i];
  return r;
}

QSeq zeros(std::size_t n) { return QSeq(n, kZero); }

QSeq cat(const QSeq& a, const QSeq& b) {
  QSeq r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

QSeq kron(const QSeq& a, const QSeq& b) {
  QSeq r;
  r.reserve(a.size() * b.size());
  for (auto x : a)
    for (auto y : b) r.push_back(x * y);
  return r;
}

QSeq seq_add(const QSeq& a, const QSeq& b) {
  if (a.size() != b.size())
    fail(Errc::LengthMismatch, "seq_add: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  QSeq r(a.size());
  for (std::size_t i = 0; i < a.size(); i++) r[i] = a[i] + b[i];
  return r;
}

QSeq seq_sub(const QSeq& a, const QSeq& b) {
  if (a.size() != b.size())
    fail(Errc::LengthMismatch, "seq_sub: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  QSeq r(a.size());
  for (std::size_t i = 0; i < a.size(); i++) r[i] = a[i] - b[i];
  return r;
}

QSeq interleave(const QSeq& a, const QSeq& b) {
  if (a.size() != b.size() && a.size() != b.size() + 1)
    fail(Errc::LengthMismatch,
         "interleave: need |a| == |b| or |a| == |b|+1, got " + std::to_string(a.size()) + " and " +
             std::to_string(b.size()));
  QSeq r;
  r.reserve(a.size() + b.size());
  for (std::size_t i = 0; i < a.size(); i++) {
    r.push_back(a[i]);
    if (i < b.size()) r.push_back(b[i]);
  }
  return r;
}

QSeq pad_to(const QSeq& a, std::size_t n) {
  if (a.size() > n) fail(Errc::LengthMismatch, "pad_to: sequence longer than target");
  QSeq r = a;
  r.resize(n, kZero);
  return r;
}

GaussInt corr_at(const QSeq& a, const QSeq& b, std::int64_t tau) {
  GaussInt s{0, 0};
  const auto n = static_cast<std::int64_t>(a.size());
  for (std::int64_t i = 0; i < n; i++) {
    std::int64_t j = i - tau;
    if (j < 0 || j >= static_cast<std::int64_t>(b.size())) continue;
    s = s + a[i] * b[j].conj();
  }
  return s;
}

std::vector<GaussInt> corr_profile(const QSeq& a, const QSeq& b) {
  const std::size_t n = std::max(a.size(), b.size());
  if (n == 0) return {};
  std::vector<GaussInt> prof(2 * n - 1, kZero);
  for (std::int64_t tau = 1 - static_cast<std::int64_t>(n); tau < static_cast<std::int64_t>(n); tau++)
    prof[static_cast<std::size_t>(tau + static_cast<std::int64_t>(n) - 1)] = corr_at(a, b, tau);
  return prof;
}

std::vector<GaussInt> acorr_profile(const QSeq& a) { return corr_profile(a, a); }

std::vector<GaussInt> pcorr_profile(const QSeq& a) {
  const auto n = static_cast<std::int64_t>(a.size());
  std::vector<GaussInt> prof(a.size(), kZero);
  for (std::int64_t tau = 0; tau < n; tau++) {
    GaussInt s{0, 0};
    for (std::int64_t i = 0; i < n; i++) s = s + a[i] * a[(i - tau % n + n) % n].conj();
    prof[static_cast<std::size_t>(tau)] = s;
  }
  return prof;
}

namespace {

// accumulate R_a over nonnegative lags into acc[0..n-1]
void accumulate_direct(const QSeq& a, std::vector<GaussInt>& acc) {
  const auto n = static_cast<std::int64_t>(a.size());
  for (std::int64_t tau = 0; tau < n; tau++) {
    GaussInt s{0, 0};
    for (std::int64_t i = tau; i < n; i++) {
      if (a[i].is_zero()) continue;
      s = s + a[i] * a[i - tau].conj();
    }
    acc[static_cast<std::size_t>(tau)] = acc[static_cast<std::size_t>(tau)] + s;
  }
}

// Exact autocorrelation sum via NTT: R_a = conv(a, flip_conj(a)) with lag
// tau at convolution index tau + n - 1. Spectra are accumulated across
// members and inverted once.
std::vector<GaussInt> accumulate_ntt(const std::vector<QSeq>& seqs, std::size_t n) {
  const std::size_t m = ntt::fit_size(2 * n - 1);
  std::vector<std::uint32_t> acc_re(m, 0), acc_im(m, 0);
  std::vector<std::uint32_t> ar(m), ai(m), br(m), bi(m);
  for (const auto& s : seqs) {
    std::fill(ar.begin(), ar.end(), 0);
    std::fill(ai.begin(), ai.end(), 0);
    std::fill(br.begin(), br.end(), 0);
    std::fill(bi.begin(), bi.end(), 0);
    for (std::size_t i = 0; i < s.size(); i++) {
      ar[i] = ntt::residue(s[i].re);
      ai[i] = ntt::residue(s[i].im);
    }
    // flip_conj padded to common length n: entry j = conj(s[n-1-j])
    for (std::size_t j = 0; j < n; j++) {
      const std::size_t src = n - 1 - j;
      if (src < s.size()) {
        br[j] = ntt::residue(s[src].re);
        bi[j] = ntt::residue(-s[src].im);
      }
    }
    ntt::transform(ar, false);
    ntt::transform(ai, false);
    ntt::transform(br, false);
    ntt::transform(bi, false);
    for (std::size_t i = 0; i < m; i++) {
      const std::uint64_t rr = std::uint64_t{ar[i]} * br[i] % ntt::kP;
      const std::uint64_t ii = std::uint64_t{ai[i]} * bi[i] % ntt::kP;
      const std::uint64_t ri = std::uint64_t{ar[i]} * bi[i] % ntt::kP;
      const std::uint64_t ir = std::uint64_t{ai[i]} * br[i] % ntt::kP;
      acc_re[i] = static_cast<std::uint32_t>((acc_re[i] + rr + ntt::kP - ii) % ntt::kP);
      acc_im[i] = static_cast<std::uint32_t>((acc_im[i] + ri + ir) % ntt::kP);
    }
  }
  ntt::transform(acc_re, true);
  ntt::transform(acc_im, true);
  std::vector<GaussInt> acc(n, kZero);
  for (std::size_t tau = 0; tau < n; tau++) {
    const std::size_t idx = tau + n - 1;
    acc[tau] = GaussInt{ntt::centered(acc_re[idx]), ntt::centered(acc_im[idx])};
  }
  return acc;
}

}  // namespace

std::string VerifyReport::describe() const {
  if (ok) return "complementary, lag-0 sum " + std::to_string(weight_sum);
  return "sum at lag " + std::to_string(first_bad_lag) + " is " + bad_value.to_string() +
         ", expected 0";
}

VerifyReport verify_gcs_set(const std::vector<QSeq>& seqs, const VerifyOptions& opt) {
  VerifyReport rep;
  std::size_t n = 0, total = 0;
  for (const auto& s : seqs) {
    require_polyphase(s, "verify_gcs_set");
    n = std::max(n, s.size());
    total += s.size();
  }
  if (total > opt.budget_entries)
    fail(Errc::BudgetExceeded, "verify_gcs_set: " + std::to_string(total) +
                                   " entries exceed certification budget " +
                                   std::to_string(opt.budget_entries));
  std::int64_t wsum = 0;
  for (const auto& s : seqs) wsum += weight(s);
  rep.weight_sum = wsum;
  if (n == 0) {
    rep.ok = true;
    return rep;
  }

  std::vector<GaussInt> acc(n, kZero);
  if (n <= opt.direct_threshold) {
    const int jobs = std::max(1, opt.jobs);
    if (jobs == 1 || seqs.size() < 2) {
      for (const auto& s : seqs) accumulate_direct(s, acc);
    } else {
      const std::size_t nt = std::min<std::size_t>(jobs, seqs.size());
      std::vector<std::vector<GaussInt>> part(nt, std::vector<GaussInt>(n, kZero));
      std::vector<std::thread> pool;
      for (std::size_t t = 0; t < nt; t++)
        pool.emplace_back([&, t] {
          for (std::size_t j = t; j < seqs.size(); j += nt) accumulate_direct(seqs[j], part[t]);
        });
      for (auto& th : pool) th.join();
      for (const auto& p : part)
        for (std::size_t i = 0; i < n; i++) acc[i] = acc[i] + p[i];
    }
  } else {
    acc = accumulate_ntt(seqs, n);
  }

  if (acc[0] != GaussInt{wsum, 0}) {
    rep.first_bad_lag = 0;
    rep.bad_value = acc[0];
    return rep;
  }
  for (std::size_t tau = 1; tau < n; tau++) {
    if (!acc[tau].is_zero()) {
      rep.first_bad_lag = static_cast<std::int64_t>(tau);
      rep.bad_value = acc[tau];
      return rep;
    }
  }
  rep.ok = true;
  return rep;
}

VerifyReport require_gcs_set(const std::vector<QSeq>& seqs, const char* what,
                             const VerifyOptions& opt) {
  VerifyReport rep = verify_gcs_set(seqs, opt);
  if (!rep.ok)
    fail(Errc::VerificationFailed, std::string(what) + ": " + rep.describe());
  return rep;
}

std::vector<std::size_t> GcsSet::lengths() const {
  std::vector<std::size_t> ls;
  ls.reserve(seqs.size());
  for (const auto& s : seqs) ls.push_back(s.size());
  return ls;
}

GcsSet make_certified(std::vector<QSeq> seqs, const char* what, const VerifyOptions& opt) {
  GcsSet set;
  set.seqs = std::move(seqs);
  for (const auto& s : set.seqs) set.n = std::max(set.n, s.size());
  VerifyReport rep = require_gcs_set(set.seqs, what, opt);
  set.weight_sum = rep.weight_sum;
  set.certified = true;
  return set;
}

}  // namespace gcs
