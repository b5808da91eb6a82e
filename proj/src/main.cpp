#include <cmath>
#include <cstdio>
#include <ctime>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gcs/golay.hpp"
#include "gcs/io.hpp"

namespace {

constexpr const char* kVersion = "gcskit 1.0.0";

struct Opts {
  std::string out;       // -o/--out
  std::string plan_out;  // --plan
  std::string spseq_out; // hadamard sp: also export the perfect sequence
  bool stamp = false;
  int jobs = 1;
  std::uint64_t bound = 10000;  // builder verified bound
  std::uint64_t p_override = 0;
  std::string corpus;
  std::uint64_t budget = std::size_t{1} << 24;
  std::string level;  // "", "full", "structural"
};

gcs::VerifyOptions verify_opts(const Opts& o) {
  gcs::VerifyOptions v;
  v.jobs = o.jobs;
  if (o.level == "full")
    v.budget_entries = std::numeric_limits<std::size_t>::max();
  else if (o.level == "structural")
    v.budget_entries = 0;
  else
    v.budget_entries = o.budget;
  return v;
}

gcs::BuildConfig build_cfg(const Opts& o) {
  gcs::BuildConfig cfg;
  cfg.verified_bound = o.bound;
  cfg.P_override = o.p_override;
  cfg.corpus_path = o.corpus;
  cfg.verify = verify_opts(o);
  return cfg;
}

gcs::HadVerifyOptions had_opts(const Opts& o) {
  gcs::HadVerifyOptions h;
  h.jobs = o.jobs;
  if (o.level == "full") h.force_full = true;
  if (o.level == "structural") h.full_threshold = 0;
  return h;
}

std::vector<std::string> stamp_lines(const Opts& o) {
  std::vector<std::string> lines;
  if (!o.stamp) return lines;
  char buf[64];
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  lines.push_back(std::string(kVersion) + " " + buf);
  return lines;
}

std::vector<std::string> seq_header(const gcs::GcsSet& s, const Opts& o) {
  std::vector<std::string> h = stamp_lines(o);
  h.push_back(std::string("verification: ") +
              (s.certified ? "full" : "structural (deferred: entry budget)"));
  h.push_back("weight-sum: " + std::to_string(s.weight_sum));
  if (s.is_cbs)
    h.push_back("cbs: s1=" + std::to_string(s.cbs_s1) + " s2=" + std::to_string(s.cbs_s2) +
                (s.pair_split ? " pair-split" : ""));
  return h;
}

void emit_text(const Opts& o, const std::string& content) {
  if (o.out.empty()) {
    std::fwrite(content.data(), 1, content.size(), stdout);
    return;
  }
  gcs::io::atomic_write(o.out, content);
}

bool wants_binary_matrix(const Opts& o) {
  const std::string suffix = ".hmat";
  return o.out.size() >= suffix.size() &&
         o.out.compare(o.out.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void emit_matrix(const Opts& o, const gcs::PMMatrix& h) {
  gcs::HadReport rep = gcs::verify_hadamard(h, had_opts(o));
  if (!rep.ok) gcs::fail(gcs::Errc::VerificationFailed, "output matrix: " + rep.describe());
  if (!o.out.empty() && wants_binary_matrix(o)) {
    gcs::io::atomic_write(o.out, gcs::io::format_matrix_binary(h));
  } else {
    std::vector<std::string> hdr = stamp_lines(o);
    hdr.push_back("verification: " + rep.mode);
    emit_text(o, gcs::io::format_matrix(h, hdr));
  }
  std::fprintf(stderr, "order %llu%s, verification %s\n",
               static_cast<unsigned long long>(h.order),
               h.block ? (" block " + std::to_string(h.block)).c_str() : "",
               rep.mode.c_str());
}

void emit_built(const Opts& o, const gcs::Built& built) {
  emit_text(o, gcs::io::format_sequences(built.set.seqs, seq_header(built.set, o)));
  if (!o.plan_out.empty()) gcs::io::atomic_write(o.plan_out, gcs::io::plan_to_json(built.plan));
}

// l:m pairs / s1:s2 pairs / plain values from a comma-separated list
std::vector<std::vector<std::uint64_t>> parse_shape_list(const std::string& arg, std::size_t parts,
                                                         const char* what) {
  std::vector<std::vector<std::uint64_t>> out;
  if (arg.empty()) return out;
  std::size_t start = 0;
  while (start <= arg.size()) {
    std::size_t comma = arg.find(',', start);
    std::string item = comma == std::string::npos ? arg.substr(start)
                                                  : arg.substr(start, comma - start);
    std::vector<std::uint64_t> vals;
    std::size_t p = 0;
    while (p <= item.size()) {
      std::size_t colon = item.find(':', p);
      std::string tok = colon == std::string::npos ? item.substr(p) : item.substr(p, colon - p);
      try {
        std::size_t used = 0;
        std::uint64_t v = std::stoull(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        vals.push_back(v);
      } catch (const std::exception&) {
        gcs::fail(gcs::Errc::InvalidArgument,
                  std::string(what) + ": bad value '" + tok + "' in '" + item + "'");
      }
      if (colon == std::string::npos) break;
      p = colon + 1;
    }
    if (vals.size() != parts)
      gcs::fail(gcs::Errc::InvalidArgument, std::string(what) + ": '" + item + "' must have " +
                                                std::to_string(parts) + " colon-separated values");
    out.push_back(std::move(vals));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

// ---- subcommand bodies ----

void cmd_build(const Opts& o, const std::string& kind, std::uint64_t n, std::uint64_t s2) {
  gcs::Builder builder(build_cfg(o));
  gcs::Built built;
  if (kind == "pair")
    built = builder.pair(n);
  else if (kind == "quad")
    built = builder.quad(n);
  else if (kind == "set")
    built = builder.build_arbitrary(n);
  else
    built = builder.cbs(n, s2);
  emit_built(o, built);
}

void cmd_hadamard_gs(const Opts& o, std::uint64_t n) {
  gcs::Builder builder(build_cfg(o));
  gcs::Built quad = builder.quad(n);
  gcs::PMMatrix h = gcs::goethals_seidel_8n(quad.set, had_opts(o));
  emit_matrix(o, h);
}

void cmd_hadamard_sp(const Opts& o, const std::string& pairs_arg, const std::string& cbs_arg,
                     const std::string& mult_arg) {
  auto pair_shapes = parse_shape_list(pairs_arg, 2, "--pairs");
  auto cbs_shapes = parse_shape_list(cbs_arg, 2, "--cbs");
  auto mult_shapes = parse_shape_list(mult_arg, 1, "--mult");
  if (pair_shapes.empty() && cbs_shapes.empty())
    gcs::fail(gcs::Errc::InvalidArgument, "need at least one of --pairs / --cbs");
  if (mult_shapes.size() != cbs_shapes.size())
    gcs::fail(gcs::Errc::InvalidArgument, "--mult must list one length per --cbs entry");

  gcs::Builder builder(build_cfg(o));
  std::vector<gcs::SupPairItem> pair_items;
  for (const auto& lm : pair_shapes)
    pair_items.push_back({builder.pair(lm[0]).set, builder.pair(lm[1]).set});
  std::vector<gcs::SupCbsItem> cbs_items;
  for (std::size_t i = 0; i < cbs_shapes.size(); ++i) {
    gcs::GcsSet mult = builder.pair(mult_shapes[i][0]).set;
    cbs_items.push_back({builder.cbs(cbs_shapes[i][0], cbs_shapes[i][1]).set, mult, mult});
  }

  gcs::SupRows rows = gcs::supplementary_rows(pair_items, cbs_items);
  gcs::SPSeq perfect = gcs::perfect_from_inputs(rows);
  if (!o.spseq_out.empty()) {
    std::vector<std::string> hdr = stamp_lines(o);
    hdr.push_back("perfect: C(0) = " + std::to_string(rows.n) + "*I, zero elsewhere");
    gcs::io::atomic_write(o.spseq_out, gcs::io::format_spseq(perfect, hdr));
  }
  unsigned log_v = 0;
  while ((std::uint32_t{1} << log_v) < perfect.v) ++log_v;
  gcs::PMMatrix h =
      gcs::block_circulant_from_perfect(perfect, gcs::sylvester(log_v), had_opts(o));
  std::fprintf(stderr, "perfect sequence over SP_%u, n=%llu\n", perfect.v,
               static_cast<unsigned long long>(rows.n));
  emit_matrix(o, h);
}

nlohmann::ordered_json asymptotic_plan_json(const gcs::AsymptoticPlan& plan) {
  nlohmann::ordered_json j;
  j["m"] = plan.m;
  j["t"] = plan.t;
  j["P"] = plan.P;
  j["gamma_total"] = plan.gamma_total;
  j["pad_doublings"] = plan.pad_doublings;
  nlohmann::ordered_json digits = nlohmann::ordered_json::array();
  for (const auto& d : plan.digits) {
    nlohmann::ordered_json dj;
    dj["value"] = d.value;
    dj["power"] = d.power;
    dj["gamma"] = d.gamma;
    dj["shift"] = d.shift;
    dj["threshold"] = d.threshold;
    dj["trusted"] = d.trusted;
    dj["executed"] = d.executed;
    nlohmann::ordered_json ps = nlohmann::ordered_json::array();
    for (const auto& s : d.pair_shapes) ps.push_back({s[0], s[1]});
    dj["pair_shapes"] = ps;
    nlohmann::ordered_json cs = nlohmann::ordered_json::array();
    for (const auto& s : d.cbs_shapes) cs.push_back({s[0], s[1], s[2]});
    dj["cbs_shapes"] = cs;
    digits.push_back(dj);
  }
  j["digits"] = digits;
  return j;
}

void cmd_hadamard_plan(const Opts& o, std::uint64_t m, bool execute) {
  gcs::AsymptoticPlan plan = gcs::asymptotic_plan(m);
  gcs::check_asymptotic_plan(plan);
  if (!execute) {
    emit_text(o, asymptotic_plan_json(plan).dump(2) + "\n");
    return;
  }
  gcs::Builder builder(build_cfg(o));
  gcs::PMMatrix h = gcs::execute_asymptotic_plan(plan, builder, had_opts(o));
  std::fprintf(stderr, "plan t=%d realized\n", plan.t);
  emit_matrix(o, h);
}

std::vector<std::uint64_t> log_samples(std::uint64_t limit, unsigned samples) {
  std::vector<std::uint64_t> pts;
  for (unsigned j = 1; j <= samples; ++j) {
    double x = std::exp(std::log(static_cast<double>(limit)) * j / samples);
    auto n = static_cast<std::uint64_t>(std::llround(x));
    if (n < 1) n = 1;
    if (n > limit) n = limit;
    if (pts.empty() || n > pts.back()) pts.push_back(n);
  }
  if (pts.empty() || pts.back() != limit) pts.push_back(limit);
  return pts;
}

void cmd_density(const Opts& o, int k, bool dense, std::uint64_t limit, unsigned samples) {
  if (k < 1 || limit < 1) gcs::fail(gcs::Errc::InvalidArgument, "need --k >= 1 and --limit >= 1");
  gcs::LengthSet s = gcs::build_Sk(limit, k, dense);
  std::string out = "n,rho,density\n";
  for (std::uint64_t n : log_samples(limit, samples)) {
    std::uint64_t rho = s.count_upto(n);
    char buf[96];
    std::snprintf(buf, sizeof buf, "%llu,%llu,%.6f\n", static_cast<unsigned long long>(n),
                  static_cast<unsigned long long>(rho),
                  static_cast<double>(rho) / static_cast<double>(n));
    out += buf;
  }
  emit_text(o, out);
}

void cmd_coverage(const Opts& o, int k, bool dense, std::uint64_t limit) {
  if (k < 1 || limit < 1) gcs::fail(gcs::Errc::InvalidArgument, "need --k >= 1 and --limit >= 1");
  gcs::LengthSet s = gcs::build_Sk(limit, k, dense);
  auto gap = s.first_gap(1);
  std::string out = "k,limit,first_gap,count\n";
  out += std::to_string(k) + "," + std::to_string(limit) + ",";
  out += gap ? std::to_string(*gap) : std::string("none");
  out += "," + std::to_string(s.count_upto(limit)) + "\n";
  emit_text(o, out);
}

void cmd_verify(const Opts& o, const std::string& path) {
  std::string content = gcs::io::read_file(path);
  auto starts_with = [&](const char* tag) {
    return content.rfind(tag, 0) == 0;
  };
  if (starts_with("HMAT")) {
    gcs::PMMatrix h = gcs::io::parse_matrix_binary(content);
    gcs::HadReport rep = gcs::verify_hadamard(h, had_opts(o));
    if (!rep.ok) gcs::fail(gcs::Errc::VerificationFailed, path + ": " + rep.describe());
    std::printf("ok: hadamard order %llu%s (%s)\n", static_cast<unsigned long long>(h.order),
                h.block ? (" block " + std::to_string(h.block)).c_str() : "", rep.mode.c_str());
    return;
  }
  if (starts_with("GLS1")) {
    std::string kind;
    gcs::LengthSet s = gcs::io::parse_lengthset_cache(content, &kind);
    std::printf("ok: length-set cache kind=%s bound=%llu count=%llu\n", kind.c_str(),
                static_cast<unsigned long long>(s.bound()),
                static_cast<unsigned long long>(s.count_upto(s.bound())));
    return;
  }
  // text formats: find the first non-blank, non-plain-comment line
  std::size_t pos = 0;
  std::string head;
  while (pos < content.size()) {
    std::size_t end = content.find('\n', pos);
    if (end == std::string::npos) end = content.size();
    std::string line = content.substr(pos, end - pos);
    std::size_t i = line.find_first_not_of(" \t\r");
    if (i != std::string::npos) {
      head = line.substr(i);
      if (head.rfind("#gcs", 0) == 0 || head.rfind("#spseq", 0) == 0 || head[0] != '#') break;
    }
    pos = end + 1;
  }
  if (head.rfind("#gcs", 0) == 0) {
    std::vector<gcs::QSeq> seqs = gcs::io::parse_sequences(content);
    gcs::VerifyReport rep = gcs::verify_gcs_set(seqs, verify_opts(o));
    if (!rep.ok) gcs::fail(gcs::Errc::VerificationFailed, path + ": " + rep.describe());
    std::printf("ok: gcs set L=%zu, weight-sum %lld\n", seqs.size(),
                static_cast<long long>(rep.weight_sum));
    return;
  }
  if (head.rfind("#spseq", 0) == 0) {
    gcs::SPSeq s = gcs::io::parse_spseq(content);
    auto lag = gcs::imperfection_lag(s);
    if (lag)
      gcs::fail(gcs::Errc::PerfectionFailed,
                path + ": not perfect (lag " + std::to_string(*lag) + ")");
    std::printf("ok: perfect sequence over SP_%u, n=%zu\n", s.v, s.size());
    return;
  }
  if (head.rfind("order", 0) == 0) {
    gcs::PMMatrix h = gcs::io::parse_matrix(content);
    gcs::HadReport rep = gcs::verify_hadamard(h, had_opts(o));
    if (!rep.ok) gcs::fail(gcs::Errc::VerificationFailed, path + ": " + rep.describe());
    std::printf("ok: hadamard order %llu%s (%s)\n", static_cast<unsigned long long>(h.order),
                h.block ? (" block " + std::to_string(h.block)).c_str() : "", rep.mode.c_str());
    return;
  }
  gcs::fail(gcs::Errc::ParseError, path + ": unrecognized format");
}

void cmd_corpus_load(const std::string& path) {
  std::vector<std::string> rejects;
  std::vector<gcs::GcsSet> records = gcs::load_base_corpus(path, &rejects);
  for (const auto& r : records)
    std::printf("ok: CBS(%llu,%llu)\n", static_cast<unsigned long long>(r.cbs_s1),
                static_cast<unsigned long long>(r.cbs_s2));
  for (const auto& r : rejects) std::fprintf(stderr, "rejected %s\n", r.c_str());
  std::printf("loaded %zu record(s), rejected %zu\n", records.size(), rejects.size());
  if (!rejects.empty())
    gcs::fail(gcs::Errc::CorpusVerificationFailed,
              std::to_string(rejects.size()) + " corpus record(s) failed verification");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"construct and verify complementary sequence sets and Hadamard matrices"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  Opts o;
  app.add_option("-o,--out", o.out, "output file (default: standard output)");
  app.add_flag("--stamp", o.stamp, "include version/date metadata in text outputs");
  app.add_option("--jobs", o.jobs, "worker threads for verification")->check(CLI::Range(1, 256));
  app.add_option("--bound", o.bound, "planner verified-coverage bound");
  app.add_option("--P", o.p_override, "override the digit base P");
  app.add_option("--corpus", o.corpus, "base-sequence corpus file");
  app.add_option("--budget", o.budget, "verification entry budget");
  app.add_option("--level", o.level, "verification level")
      ->check(CLI::IsMember({"full", "structural"}));

  std::uint64_t n = 0, s2 = 0, m = 0;
  std::string file_arg, pairs_arg, cbs_arg, mult_arg;
  int k = 1;
  bool dense = false, execute = false;
  std::uint64_t limit = 10000;
  unsigned samples = 48;

  auto* c_pair = app.add_subcommand("pair", "build a complementary pair of length n");
  c_pair->add_option("n", n, "length")->required();
  c_pair->add_option("--plan", o.plan_out, "write the construction plan as JSON");
  c_pair->callback([&] { cmd_build(o, "pair", n, 0); });

  auto* c_quad = app.add_subcommand("quad", "build a 4-sequence set of length n");
  c_quad->add_option("n", n, "length")->required();
  c_quad->add_option("--plan", o.plan_out, "write the construction plan as JSON");
  c_quad->callback([&] { cmd_build(o, "quad", n, 0); });

  auto* c_set = app.add_subcommand("set", "build a minimal-cardinality set for any length n");
  c_set->add_option("n", n, "length")->required();
  c_set->add_option("--plan", o.plan_out, "write the construction plan as JSON");
  c_set->callback([&] { cmd_build(o, "set", n, 0); });

  auto* c_cbs = app.add_subcommand("cbs", "build complex base sequences CBS(s1, s2)");
  c_cbs->add_option("s1", n, "first length")->required();
  c_cbs->add_option("s2", s2, "second length")->required();
  c_cbs->add_option("--plan", o.plan_out, "write the construction plan as JSON");
  c_cbs->callback([&] { cmd_build(o, "cbs", n, s2); });

  auto* c_had = app.add_subcommand("hadamard", "Hadamard matrix constructions");
  c_had->require_subcommand(1);

  auto* c_gs = c_had->add_subcommand("gs", "order 8n from a length-n quad");
  c_gs->add_option("n", n, "quad length")->required();
  c_gs->callback([&] { cmd_hadamard_gs(o, n); });

  auto* c_sp = c_had->add_subcommand("sp", "block-circulant route via a perfect sequence");
  c_sp->add_option("--pairs", pairs_arg, "pair items l:m, comma separated");
  c_sp->add_option("--cbs", cbs_arg, "CBS items s1:s2, comma separated");
  c_sp->add_option("--mult", mult_arg, "multiplier length t per CBS item");
  c_sp->add_option("--spseq", o.spseq_out, "also write the perfect sequence");
  c_sp->callback([&] { cmd_hadamard_sp(o, pairs_arg, cbs_arg, mult_arg); });

  auto* c_plan = c_had->add_subcommand("plan", "asymptotic digit plan for odd m");
  c_plan->add_option("m", m, "odd target")->required();
  c_plan->add_flag("--execute", execute, "realize an executable single-digit plan");
  c_plan->callback([&] { cmd_hadamard_plan(o, m, execute); });

  auto* c_density = app.add_subcommand("density", "coverage density CSV for S_k");
  c_density->add_option("--k", k, "set index k")->required();
  c_density->add_flag("--dense", dense, "use the widened k=2 stage");
  c_density->add_option("--limit", limit, "enumeration bound N")->required();
  c_density->add_option("--samples", samples, "log-spaced sample count");
  c_density->callback([&] { cmd_density(o, k, dense, limit, samples); });

  auto* c_cov = app.add_subcommand("coverage", "first gap and member count for S_k");
  c_cov->add_option("--k", k, "set index k")->required();
  c_cov->add_flag("--dense", dense, "use the widened k=2 stage");
  c_cov->add_option("--limit", limit, "enumeration bound N")->required();
  c_cov->callback([&] { cmd_coverage(o, k, dense, limit); });

  auto* c_verify = app.add_subcommand("verify", "re-verify a written artifact");
  c_verify->add_option("file", file_arg, "artifact path")->required();
  c_verify->callback([&] { cmd_verify(o, file_arg); });

  auto* c_corpus = app.add_subcommand("corpus", "base-sequence corpus utilities");
  c_corpus->require_subcommand(1);
  auto* c_load = c_corpus->add_subcommand("load", "parse and verify a corpus file");
  c_load->add_option("path", file_arg, "corpus path")->required();
  c_load->callback([&] { cmd_corpus_load(file_arg); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const gcs::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.exit_class();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
