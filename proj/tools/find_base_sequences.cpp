// Exhaustive search for +/-1 base quads with lengths (b+1, b+1, b, b) whose
// aperiodic autocorrelations sum to zero at every nonzero lag. Entries are
// assigned from both ends inward, one sequence at a time; per-lag running
// sums track the determined products (known) and the count of products still
// touching an unassigned entry (open), so a branch dies as soon as some lag
// can no longer reach zero (|known| > open, or parity mismatch). Found quads
// are emitted in the sequence text format, one record per b, ready for
// `corpus load`.

#include <array>
#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gcs/golay.hpp"
#include "gcs/io.hpp"
#include "gcs/seq.hpp"

namespace {

using Clock = std::chrono::steady_clock;

struct Search {
  int b = 0;
  std::array<std::vector<int>, 4> s;  // entries in {-1, 0, +1}, 0 = unassigned
  std::array<int, 4> len{};
  std::vector<int> known;  // per-lag sum of fully determined products
  std::vector<int> open;   // per-lag count of products with an unassigned factor
  Clock::time_point deadline;
  long long nodes = 0;
  bool found = false;
  bool timed_out = false;

  explicit Search(int b_) : b(b_) {
    len = {b + 1, b + 1, b, b};
    for (int q = 0; q < 4; ++q) s[q].assign(len[q], 0);
    known.assign(b + 1, 0);
    open.assign(b + 1, 0);
    for (int q = 0; q < 4; ++q)
      for (int tau = 1; tau < len[q]; ++tau) open[tau] += len[q] - tau;
  }

  // place v at s[q][pos], updating the lag ledgers for every product the
  // entry participates in (sign = +1 to apply, -1 to undo)
  void apply(int q, int pos, int v, int sign) {
    const std::vector<int>& seq = s[q];
    int l = len[q];
    for (int j = 0; j < l; ++j) {
      if (j == pos) continue;
      int tau = j > pos ? j - pos : pos - j;
      if (seq[j] == 0) continue;
      // partner already assigned: the product leaves the open pool
      known[tau] += sign * v * seq[j];
      open[tau] -= sign;
    }
    s[q][pos] = sign > 0 ? v : 0;
  }

  bool feasible() const {
    for (int tau = 1; tau <= b; ++tau) {
      int k = known[tau] < 0 ? -known[tau] : known[tau];
      if (k > open[tau] || ((k + open[tau]) & 1)) return false;
    }
    return true;
  }

  // depth k assigns positions k and len-1-k of sequence q, then moves to the
  // next sequence; k advances after sequence 3
  bool dfs(int k, int q) {
    if (++nodes % 8192 == 0 && Clock::now() > deadline) {
      timed_out = true;
      return false;
    }
    while (true) {
      if (q == 4) {
        ++k;
        q = 0;
      }
      if (k >= (len[0] + 1) / 2) {
        found = true;
        return true;
      }
      int f = k, r = len[q] - 1 - k;
      if (f > r || (s[q][f] != 0 && (f == r || s[q][r] != 0))) {
        ++q;  // nothing left to place in this sequence at this depth
        continue;
      }
      break;
    }

    int f = k, r = len[q] - 1 - k;
    if (f == r || s[q][r] != 0) {
      int pos = s[q][f] == 0 ? f : r;
      for (int v : {1, -1}) {
        apply(q, pos, v, +1);
        if (feasible() && dfs(k, q + 1)) return true;
        apply(q, pos, v, -1);
        if (timed_out) return false;
      }
      return false;
    }
    for (int vf : {1, -1}) {
      for (int vr : {1, -1}) {
        apply(q, f, vf, +1);
        apply(q, r, vr, +1);
        if (feasible() && dfs(k, q + 1)) return true;
        apply(q, r, vr, -1);
        apply(q, f, vf, -1);
        if (timed_out) return false;
      }
    }
    return false;
  }
};

gcs::QSeq to_qseq(const std::vector<int>& v) {
  gcs::QSeq out;
  for (int e : v) out.push_back(gcs::GaussInt{e, 0});
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"search for base quads feeding the CBS corpus"};
  int min_b = 1, max_b = 38;
  double cap_seconds = 10.0;
  std::string only, out_path = "base_corpus.txt";
  bool include_golay = false;
  app.add_option("--min", min_b, "smallest b to try");
  app.add_option("--max", max_b, "largest b to try");
  app.add_option("--cap", cap_seconds, "per-b time cap in seconds");
  app.add_option("--only", only, "comma-separated b values (overrides min/max)");
  app.add_flag("--include-golay", include_golay, "also search b values the pair builder covers");
  app.add_option("-o,--out", out_path, "output corpus file");
  CLI11_PARSE(app, argc, argv);

  std::vector<int> targets;
  if (!only.empty()) {
    std::size_t start = 0;
    while (start <= only.size()) {
      std::size_t comma = only.find(',', start);
      std::string tok =
          comma == std::string::npos ? only.substr(start) : only.substr(start, comma - start);
      targets.push_back(std::stoi(tok));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  } else {
    for (int b = min_b; b <= max_b; ++b) {
      // the pair route already yields CBS(g+1, g) for pair lengths g, and
      // b = 7 ships built in; search only the values that add coverage
      if (!include_golay && (gcs::golay_membership(b) || b == 7)) continue;
      targets.push_back(b);
    }
  }

  std::string out;
  int found = 0;
  for (int b : targets) {
    Search search(b);
    // negating any one sequence preserves the property; pin the leading entries
    for (int q = 0; q < 4; ++q)
      if (search.len[q] > 0) search.apply(q, 0, 1, +1);
    search.deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                         std::chrono::duration<double>(cap_seconds));
    auto t0 = Clock::now();
    search.dfs(0, 0);
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (!search.found) {
      std::fprintf(stderr, "b=%d: %s after %.1fs (%lld nodes)\n", b,
                   search.timed_out ? "time cap" : "no quad", secs, search.nodes);
      continue;
    }
    std::vector<gcs::QSeq> quad;
    for (int q = 0; q < 4; ++q) quad.push_back(to_qseq(search.s[q]));
    gcs::VerifyReport rep = gcs::verify_gcs_set(quad);
    if (!rep.ok) {
      std::fprintf(stderr, "b=%d: search result failed verification: %s\n", b,
                   rep.describe().c_str());
      return 1;
    }
    out += gcs::io::format_sequences(quad, {"b=" + std::to_string(b)});
    ++found;
    std::fprintf(stderr, "b=%d: found in %.1fs (%lld nodes), weight sum %lld\n", b, secs,
                 search.nodes, static_cast<long long>(rep.weight_sum));
  }

  if (found == 0) {
    std::fprintf(stderr, "no quads found\n");
    return 1;
  }
  gcs::io::atomic_write(out_path, out);
  std::fprintf(stderr, "wrote %d record(s) to %s\n", found, out_path.c_str());
  return 0;
}
