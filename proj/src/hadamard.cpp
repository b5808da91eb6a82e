#include "gcs/hadamard.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <functional>
#include <thread>

#include "gcs/error.hpp"
#include "gcs/golay.hpp"

namespace gcs {

namespace {

// copy `count` bits from src starting at src_bit into dst starting at
// dst_bit, optionally inverted; ranges live in separate vectors
void copy_bits(std::vector<std::uint64_t>& dst, std::uint64_t dst_bit,
               const std::vector<std::uint64_t>& src, std::uint64_t src_bit, std::uint64_t count,
               bool invert) {
  for (std::uint64_t k = 0; k < count; k++) {
    const std::uint64_t s = src_bit + k;
    bool bit = (src[s / 64] >> (s % 64)) & 1;
    if (invert) bit = !bit;
    const std::uint64_t d = dst_bit + k;
    if (bit)
      dst[d / 64] |= std::uint64_t{1} << (d % 64);
    else
      dst[d / 64] &= ~(std::uint64_t{1} << (d % 64));
  }
}

// agreement defect between two rows: popcount of xor over `order` columns
std::uint64_t row_xor_popcount(const PMMatrix& h, std::uint64_t ra, std::uint64_t rb) {
  const std::size_t w = h.words_per_row();
  const std::uint64_t* a = h.bits.data() + ra * w;
  const std::uint64_t* b = h.bits.data() + rb * w;
  std::uint64_t total = 0;
  const std::uint64_t tail = h.order % 64;
  for (std::size_t i = 0; i < w; i++) {
    std::uint64_t x = a[i] ^ b[i];
    if (tail != 0 && i + 1 == w) x &= (std::uint64_t{1} << tail) - 1;
    total += static_cast<std::uint64_t>(std::popcount(x));
  }
  return total;
}

void parallel_rows(std::uint64_t rows, int jobs, const std::function<void(std::uint64_t)>& fn) {
  jobs = std::max(1, jobs);
  if (jobs == 1) {
    for (std::uint64_t r = 0; r < rows; r++) fn(r);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<std::uint64_t> next{0};
  for (int t = 0; t < jobs; t++)
    pool.emplace_back([&] {
      for (;;) {
        const std::uint64_t r = next.fetch_add(1);
        if (r >= rows) return;
        fn(r);
      }
    });
  for (auto& th : pool) th.join();
}

}  // namespace

PMMatrix make_pm(std::uint64_t order) {
  PMMatrix h;
  h.order = order;
  h.bits.assign(order * ((order + 63) / 64), 0);
  return h;
}

std::string HadReport::describe() const {
  if (ok) return "ok (" + mode + ")";
  return "rows " + std::to_string(row_a) + " and " + std::to_string(row_b) +
         " are not orthogonal (" + mode + ")";
}

PMMatrix sylvester_double(const PMMatrix& h) {
  const std::uint64_t n = h.order;
  PMMatrix out = make_pm(2 * n);
  const std::size_t wi = h.words_per_row(), wo = out.words_per_row();
  for (std::uint64_t r = 0; r < n; r++) {
    std::vector<std::uint64_t> row(h.bits.begin() + r * wi, h.bits.begin() + (r + 1) * wi);
    std::vector<std::uint64_t> top(wo, 0), bottom(wo, 0);
    copy_bits(top, 0, row, 0, n, false);
    copy_bits(top, n, row, 0, n, false);
    copy_bits(bottom, 0, row, 0, n, false);
    copy_bits(bottom, n, row, 0, n, true);
    std::copy(top.begin(), top.end(), out.bits.begin() + r * wo);
    std::copy(bottom.begin(), bottom.end(), out.bits.begin() + (n + r) * wo);
  }
  return out;
}

PMMatrix sylvester(unsigned t) {
  PMMatrix h = make_pm(1);
  for (unsigned s = 0; s < t; s++) h = sylvester_double(h);
  return h;
}

HadReport verify_hadamard(const PMMatrix& h, const HadVerifyOptions& opt) {
  HadReport rep;
  const std::uint64_t n = h.order;
  if (n == 0) {
    rep.ok = false;
    rep.mode = "full";
    return rep;
  }
  const bool structure = h.block != 0 && n > opt.full_threshold && !opt.force_full;
  rep.mode = structure ? "structure" : "full";

  if (!structure) {
    std::atomic<bool> ok{true};
    std::atomic<std::uint64_t> bad_a{0}, bad_b{0};
    parallel_rows(n, opt.jobs, [&](std::uint64_t ra) {
      if (!ok.load(std::memory_order_relaxed)) return;
      for (std::uint64_t rb = ra + 1; rb < n; rb++) {
        if (row_xor_popcount(h, ra, rb) != n / 2) {
          bool expected = true;
          if (ok.compare_exchange_strong(expected, false)) {
            bad_a = ra;
            bad_b = rb;
          }
          return;
        }
      }
    });
    rep.ok = ok;
    rep.row_a = bad_a;
    rep.row_b = bad_b;
    return rep;
  }

  // structure mode: row (v*r + a) must equal row a rotated right by v*r bits,
  // and the first block row must be orthogonal to every row
  const std::uint64_t v = h.block;
  const std::size_t w = h.words_per_row();
  std::atomic<bool> ok{true};
  std::atomic<std::uint64_t> bad_a{0}, bad_b{0};
  parallel_rows(n, opt.jobs, [&](std::uint64_t r) {
    if (!ok.load(std::memory_order_relaxed)) return;
    const std::uint64_t block_row = r / v, a = r % v;
    const std::uint64_t shift = block_row * v;
    const std::uint64_t* row = h.bits.data() + r * w;
    const std::uint64_t* base = h.bits.data() + a * w;
    for (std::uint64_t c = 0; c < n; c++) {
      const std::uint64_t src = (c + n - shift) % n;
      if (((row[c / 64] >> (c % 64)) & 1) != ((base[src / 64] >> (src % 64)) & 1)) {
        bool expected = true;
        if (ok.compare_exchange_strong(expected, false)) {
          bad_a = r;
          bad_b = a;
        }
        return;
      }
    }
  });
  if (!ok) {
    rep.ok = false;
    rep.row_a = bad_a;
    rep.row_b = bad_b;
    return rep;
  }
  parallel_rows(n, opt.jobs, [&](std::uint64_t rb) {
    if (!ok.load(std::memory_order_relaxed)) return;
    for (std::uint64_t ra = 0; ra < v; ra++) {
      if (ra == rb) continue;
      if (row_xor_popcount(h, ra, rb) != n / 2) {
        bool expected = true;
        if (ok.compare_exchange_strong(expected, false)) {
          bad_a = ra;
          bad_b = rb;
        }
        return;
      }
    }
  });
  rep.ok = ok;
  rep.row_a = bad_a;
  rep.row_b = bad_b;
  return rep;
}

namespace {

// 2x2 substitution blocks, row-major signs
using Sub2 = std::array<int, 4>;

Sub2 unit_substitution(GaussInt z, bool with_j) {
  auto scaled = [](Sub2 s, int k) {
    for (auto& x : s) x *= k;
    return s;
  };
  if (!with_j) {
    if (z == kOne) return {1, 1, 1, -1};
    if (z == -kOne) return scaled({1, 1, 1, -1}, -1);
    if (z == kImag) return {-1, 1, 1, 1};
    if (z == -kImag) return scaled({-1, 1, 1, 1}, -1);
  } else {
    if (z == kOne) return {1, 1, -1, 1};
    if (z == -kOne) return scaled({1, 1, -1, 1}, -1);
    if (z == kImag) return {1, -1, 1, 1};
    if (z == -kImag) return scaled({1, -1, 1, 1}, -1);
  }
  fail(Errc::InvalidArgument, "unit_substitution: entry " + z.to_string() + " is not a unit");
}

}  // namespace

PMMatrix goethals_seidel_8n(const GcsSet& quad, const HadVerifyOptions& opt) {
  if (quad.cardinality() != 4) fail(Errc::NotQuad, "goethals_seidel_8n: need exactly 4 sequences");
  const std::uint64_t n = quad.seqs[0].size();
  for (const auto& s : quad.seqs)
    if (s.size() != n) fail(Errc::NotQuad, "goethals_seidel_8n: members must share one length");
  if (!quad.certified) fail(Errc::NotCertifiedInput, "goethals_seidel_8n: quad is not certified");
  for (const auto& s : quad.seqs)
    for (auto z : s)
      if (z.is_zero())
        fail(Errc::InvalidArgument, "goethals_seidel_8n: zero entry cannot fill the array");

  const QSeq& a = quad.seqs[0];
  const QSeq bs = flip_conj(quad.seqs[1]);
  const QSeq cs = flip_conj(quad.seqs[2]);
  const QSeq ds = flip_conj(quad.seqs[3]);
  const QSeq& b = quad.seqs[1];
  const QSeq& c = quad.seqs[2];
  const QSeq& d = quad.seqs[3];

  struct BlockSpec {
    const QSeq* seq;
    int sign;
    bool reversed;  // right-multiplied by the back identity
    bool with_j;
  };
  const BlockSpec blocks[4][4] = {
      {{&a, 1, false, false}, {&b, -1, true, true}, {&c, -1, true, true}, {&d, -1, true, true}},
      {{&b, 1, true, true}, {&a, 1, false, false}, {&ds, -1, true, true}, {&cs, 1, true, true}},
      {{&c, 1, true, true}, {&ds, 1, true, true}, {&a, 1, false, false}, {&bs, -1, true, true}},
      {{&d, 1, true, true}, {&cs, -1, true, true}, {&bs, 1, true, true}, {&a, 1, false, false}},
  };

  PMMatrix h = make_pm(8 * n);
  for (int br = 0; br < 4; br++) {
    for (int bc = 0; bc < 4; bc++) {
      const BlockSpec& spec = blocks[br][bc];
      for (std::uint64_t r = 0; r < n; r++) {
        for (std::uint64_t cc = 0; cc < n; cc++) {
          const std::uint64_t col = spec.reversed ? n - 1 - cc : cc;
          GaussInt z = (*spec.seq)[(col + n - r % n) % n];
          if (spec.sign < 0) z = -z;
          const Sub2 sub = unit_substitution(z, spec.with_j);
          const std::uint64_t row0 = 2 * (static_cast<std::uint64_t>(br) * n + r);
          const std::uint64_t col0 = 2 * (static_cast<std::uint64_t>(bc) * n + cc);
          for (int dr = 0; dr < 2; dr++)
            for (int dc = 0; dc < 2; dc++)
              if (sub[2 * dr + dc] < 0) h.set_neg(row0 + dr, col0 + dc);
        }
      }
    }
  }
  HadReport rep = verify_hadamard(h, opt);
  if (!rep.ok)
    fail(Errc::VerificationFailed, "goethals_seidel_8n: " + rep.describe());
  return h;
}

PMMatrix block_circulant_from_perfect(const SPSeq& c, const PMMatrix& h_v,
                                      const HadVerifyOptions& opt) {
  const std::uint64_t v = c.v;
  const std::uint64_t n = c.size();
  if (h_v.order != v)
    fail(Errc::OrderMismatch, "block_circulant_from_perfect: seed order " +
                                  std::to_string(h_v.order) + " does not match sequence order " +
                                  std::to_string(v));
  if (auto bad = imperfection_lag(c))
    fail(Errc::NotPerfect,
         "block_circulant_from_perfect: sequence fails the periodic profile at lag " +
             std::to_string(*bad));
  {
    HadReport seed = verify_hadamard(h_v, opt);
    if (!seed.ok)
      fail(Errc::NotHadamardSeed, "block_circulant_from_perfect: seed " + seed.describe());
  }

  // block row 0: block col j is dense(c_j) * H_v; each output row picks a
  // signed row of H_v
  PMMatrix h = make_pm(v * n);
  const std::size_t w = h.words_per_row();
  const std::size_t wv = h_v.words_per_row();
  for (std::uint64_t j = 0; j < n; j++) {
    const SignedPerm xt = sp_transpose(*c.entries[j]);
    for (std::uint64_t rr = 0; rr < v; rr++) {
      const std::uint64_t src_row = xt.image[rr];
      const bool invert = xt.sign[rr] < 0;
      std::vector<std::uint64_t> seed_row(h_v.bits.begin() + src_row * wv,
                                          h_v.bits.begin() + (src_row + 1) * wv);
      std::vector<std::uint64_t> tmp(w, 0);
      std::copy(h.bits.begin() + rr * w, h.bits.begin() + (rr + 1) * w, tmp.begin());
      copy_bits(tmp, v * j, seed_row, 0, v, invert);
      std::copy(tmp.begin(), tmp.end(), h.bits.begin() + rr * w);
    }
  }
  // remaining block rows: cyclic shift by v*r bits
  const std::uint64_t order = v * n;
  for (std::uint64_t r = 1; r < n; r++) {
    for (std::uint64_t rr = 0; rr < v; rr++) {
      std::vector<std::uint64_t> base(h.bits.begin() + rr * w, h.bits.begin() + (rr + 1) * w);
      std::vector<std::uint64_t> rolled(w, 0);
      const std::uint64_t shift = v * r;
      copy_bits(rolled, shift, base, 0, order - shift, false);
      copy_bits(rolled, 0, base, order - shift, shift, false);
      std::copy(rolled.begin(), rolled.end(), h.bits.begin() + (v * r + rr) * w);
    }
  }
  h.block = v;
  HadReport rep = verify_hadamard(h, opt);
  if (!rep.ok)
    fail(Errc::VerificationFailed, "block_circulant_from_perfect: " + rep.describe());
  return h;
}

// ---- asymptotic planner ----

namespace {

constexpr std::uint64_t kDigitBase = std::uint64_t{1} << 40;
constexpr std::uint64_t kThresholdLow = std::uint64_t{1} << 44;   // full budget, no scale
constexpr std::uint64_t kThresholdHigh = std::uint64_t{1} << 40;  // reduced budget, scale 2^4
constexpr std::uint64_t kExecJoint = std::uint64_t{1} << 16;      // largest v*n built eagerly

// exhaustive small-digit decomposition with the fixed doubling budget
// 2k+4d = 6: one pair product plus one CBS term, or three pair products
bool decompose_digit(std::uint64_t value, DigitPlan& digit) {
  if (value == 1) {
    // realized by pure doubling, no sequence components
    digit.executed = true;
    return true;
  }
  auto product2 = [](std::uint64_t x) -> std::optional<std::array<std::uint64_t, 2>> {
    for (std::uint64_t l = 1; l * l <= x; l++) {
      if (x % l != 0) continue;
      if (golay_membership(l) && golay_membership(x / l)) return std::array{l, x / l};
    }
    return std::nullopt;
  };
  // (k, d) = (1, 1)
  for (std::uint64_t lm = 1; lm + 1 <= value; lm++) {
    auto pr = product2(lm);
    if (!pr) continue;
    const std::uint64_t rem = value - lm;
    for (std::uint64_t t = 1; t <= rem; t++) {
      if (rem % t != 0 || !golay_membership(t)) continue;
      const std::uint64_t q = rem / t;
      // base-type CBS(b+1, b)
      if (q % 2 == 1) {
        const std::uint64_t bb = (q - 1) / 2;
        if (bb == 7 || (bb >= 1 && golay_membership(bb))) {
          digit.pair_shapes.push_back(*pr);
          digit.cbs_shapes.push_back({bb + 1, bb, t});
          digit.executed = true;
          return true;
        }
      }
      // pair-split CBS(s1, s2), s2 possibly 0
      for (std::uint64_t s2 = 0; 2 * s2 <= q; s2++) {
        const std::uint64_t s1 = q - s2;
        if (s2 != 0 && !golay_membership(s2)) continue;
        if (!golay_membership(s1)) continue;
        digit.pair_shapes.push_back(*pr);
        digit.cbs_shapes.push_back({s1, s2, t});
        digit.executed = true;
        return true;
      }
    }
  }
  // (k, d) = (3, 0)
  for (std::uint64_t lm1 = 1; 3 * lm1 <= value; lm1++) {
    auto p1 = product2(lm1);
    if (!p1) continue;
    for (std::uint64_t lm2 = lm1; lm1 + 2 * lm2 <= value; lm2++) {
      auto p2 = product2(lm2);
      if (!p2) continue;
      const std::uint64_t lm3 = value - lm1 - lm2;
      auto p3 = product2(lm3);
      if (!p3) continue;
      digit.pair_shapes = {*p1, *p2, *p3};
      digit.executed = true;
      return true;
    }
  }
  return false;
}

}  // namespace

AsymptoticPlan asymptotic_plan(std::uint64_t m) {
  if (m == 0 || m % 2 == 0)
    fail(Errc::InvalidArgument, "asymptotic_plan: target must be odd and positive");
  AsymptoticPlan plan;
  plan.m = m;
  plan.P = kDigitBase;

  std::uint64_t rest = m;
  unsigned power = 0;
  std::uint64_t m0 = m % kDigitBase;
  unsigned top_power = 0;
  while (rest != 0) {
    const std::uint64_t val = rest % kDigitBase;
    if (val != 0) {
      DigitPlan d;
      d.value = val;
      d.power = power;
      if (power == 0) {
        d.gamma = 8;
        d.shift = 0;
        d.threshold = kThresholdLow;
      } else {
        d.gamma = 6;
        d.shift = 4;
        d.threshold = kThresholdHigh;
      }
      d.trusted = true;
      if (val > d.threshold)
        fail(Errc::ThresholdUnavailable,
             "digit " + std::to_string(val) + " exceeds the trusted threshold");
      plan.digits.push_back(std::move(d));
      top_power = power;
    }
    rest /= kDigitBase;
    power++;
  }

  const unsigned r = top_power;
  plan.gamma_total = m0 == 0 ? 6 * static_cast<int>(r) : 8 + 6 * static_cast<int>(r);
  plan.t = 6 * static_cast<int>((std::bit_width(m) - 1) / 40) + 10;
  plan.pad_doublings = plan.t - (plan.gamma_total + 2);

  // concrete witness search only in the directly buildable regime
  if (plan.digits.size() == 1 && plan.digits[0].power == 0) {
    const std::uint64_t vn = (std::uint64_t{1} << (plan.digits[0].gamma - 2)) * 4 * m;
    if (vn <= kExecJoint) (void)decompose_digit(plan.digits[0].value, plan.digits[0]);
  }
  check_asymptotic_plan(plan);
  return plan;
}

void check_asymptotic_plan(const AsymptoticPlan& plan) {
  unsigned __int128 sum = 0;
  for (const auto& d : plan.digits) {
    unsigned __int128 scale = 1;
    for (unsigned i = 0; i < d.power; i++) scale *= plan.P;
    sum += static_cast<unsigned __int128>(d.value) * scale;
    if (d.executed && d.value != 1) {
      std::uint64_t parts = 0;
      for (const auto& [l, mm] : d.pair_shapes) parts += l * mm;
      for (const auto& [s1, s2, t] : d.cbs_shapes) parts += (s1 + s2) * t;
      if (parts != d.value)
        fail(Errc::PlanArithmeticMismatch, "digit " + std::to_string(d.value) +
                                               " decomposition sums to " + std::to_string(parts));
    }
  }
  if (sum != static_cast<unsigned __int128>(plan.m))
    fail(Errc::PlanArithmeticMismatch,
         "digits do not reconstruct the target " + std::to_string(plan.m));
  const int expected_t = 6 * static_cast<int>((std::bit_width(plan.m) - 1) / 40) + 10;
  if (plan.t != expected_t)
    fail(Errc::PlanArithmeticMismatch, "t is " + std::to_string(plan.t) + ", formula gives " +
                                           std::to_string(expected_t));
  if (plan.pad_doublings < 0)
    fail(Errc::PlanArithmeticMismatch, "negative padding");
}

PMMatrix execute_asymptotic_plan(const AsymptoticPlan& plan, Builder& builder,
                                 const HadVerifyOptions& opt) {
  check_asymptotic_plan(plan);
  if (plan.digits.size() != 1 || !plan.digits[0].executed)
    fail(Errc::ThresholdUnavailable,
         "plan is certificate-only; no directly buildable decomposition recorded");
  const DigitPlan& d = plan.digits[0];
  const int doublings = plan.t - d.gamma;  // from order 2^gamma * m to 2^t * m

  PMMatrix h;
  if (d.value == 1) {
    h = sylvester(static_cast<unsigned>(plan.t));
    return h;
  }
  std::vector<SupPairItem> pairs;
  std::vector<SupCbsItem> cbs_items;
  for (const auto& [l, mm] : d.pair_shapes)
    pairs.push_back({builder.pair(l).set, builder.pair(mm).set});
  for (const auto& [s1, s2, t] : d.cbs_shapes) {
    GcsSet mult = builder.pair(t).set;
    cbs_items.push_back({builder.cbs(s1, s2).set, mult, mult});
  }
  SupRows rows = supplementary_rows(pairs, cbs_items);
  SPSeq perfect = perfect_from_inputs(rows);
  const unsigned log_v = static_cast<unsigned>(std::bit_width(std::uint64_t{perfect.v}) - 1);
  h = block_circulant_from_perfect(perfect, sylvester(log_v), opt);
  for (int k = 0; k < doublings; k++) h = sylvester_double(h);
  HadReport rep = verify_hadamard(h, opt);
  if (!rep.ok) fail(Errc::VerificationFailed, "padded matrix: " + rep.describe());
  return h;
}

}  // namespace gcs
