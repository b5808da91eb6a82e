#include "gcs/io.hpp"

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string_view>

#include <json.hpp>

namespace gcs::io {
namespace {

using nlohmann::ordered_json;

[[noreturn]] void parse_fail(std::size_t line, std::size_t col, const std::string& msg) {
  fail(Errc::ParseError,
       "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
}

struct Line {
  std::size_t no = 0;       // 1-based
  std::string_view text;    // raw, comment not yet stripped
};

std::vector<Line> split_lines(const std::string& text) {
  std::vector<Line> out;
  std::size_t start = 0, no = 1;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) {
      if (start < text.size()) out.push_back({no, std::string_view(text).substr(start)});
      break;
    }
    out.push_back({no, std::string_view(text).substr(start, end - start)});
    start = end + 1;
    ++no;
  }
  return out;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::size_t first_nonspace(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size() && is_space(s[i])) ++i;
  return i;
}

bool starts_header(std::string_view s, std::string_view tag) {
  std::size_t i = first_nonspace(s);
  if (s.substr(i, tag.size()) != tag) return false;
  std::size_t j = i + tag.size();
  return j >= s.size() || is_space(s[j]);
}

// content with any trailing comment removed; header lines keep their leading
// tag and drop only a second '#' onward
std::string_view strip_comment(std::string_view s, bool header) {
  std::size_t from = 0;
  if (header) from = s.find('#') + 1;  // past the tag's own '#'
  std::size_t pos = s.find('#', from);
  if (pos == std::string_view::npos) return s;
  return s.substr(0, pos);
}

bool blank_or_comment(std::string_view s) {
  std::size_t i = first_nonspace(s);
  return i == s.size() || s[i] == '#';
}

std::uint64_t parse_u64(std::string_view tok, std::size_t line, std::size_t col,
                        const char* what) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || p != tok.data() + tok.size())
    parse_fail(line, col, std::string("expected ") + what + ", got '" + std::string(tok) + "'");
  return v;
}

// "key=<u64>" with fixed key
std::uint64_t parse_kv(std::string_view tok, std::string_view key, std::size_t line,
                       std::size_t col) {
  if (tok.substr(0, key.size()) != key || tok.size() <= key.size() || tok[key.size()] != '=')
    parse_fail(line, col, "expected '" + std::string(key) + "=<count>', got '" + std::string(tok) + "'");
  return parse_u64(tok.substr(key.size() + 1), line, col + key.size() + 1, "a number");
}

// whitespace-separated fields with their 1-based start columns
std::vector<std::pair<std::string_view, std::size_t>> fields_of(std::string_view s) {
  std::vector<std::pair<std::string_view, std::size_t>> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    if (i >= s.size()) break;
    std::size_t j = i;
    while (j < s.size() && !is_space(s[j])) ++j;
    out.emplace_back(s.substr(i, j - i), i + 1);
    i = j;
  }
  return out;
}

std::optional<GaussInt> unit_from_token(std::string_view tok) {
  if (tok == "0") return GaussInt{0, 0};
  if (tok == "1") return GaussInt{1, 0};
  if (tok == "-1") return GaussInt{-1, 0};
  if (tok == "i") return GaussInt{0, 1};
  if (tok == "-i") return GaussInt{0, -1};
  return std::nullopt;
}

// comma-separated unit tokens; returns the parsed sequence
QSeq parse_unit_line(std::string_view s, std::size_t line_no) {
  QSeq seq;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = s.find(',', start);
    std::string_view raw =
        comma == std::string_view::npos ? s.substr(start) : s.substr(start, comma - start);
    std::size_t lead = first_nonspace(raw);
    std::size_t tail = raw.size();
    while (tail > lead && is_space(raw[tail - 1])) --tail;
    std::string_view tok = raw.substr(lead, tail - lead);
    std::size_t col = start + lead + 1;
    if (tok.empty()) parse_fail(line_no, col, "empty entry");
    auto unit = unit_from_token(tok);
    if (!unit)
      parse_fail(line_no, col,
                 "bad entry '" + std::string(tok) + "' (expected 0, 1, -1, i or -i)");
    seq.push_back(*unit);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return seq;
}

// one #gcs record beginning at lines[idx]; advances idx past the record
std::vector<QSeq> parse_gcs_record(const std::vector<Line>& lines, std::size_t& idx) {
  while (idx < lines.size() && !starts_header(lines[idx].text, "#gcs") &&
         blank_or_comment(lines[idx].text))
    ++idx;
  if (idx >= lines.size()) parse_fail(lines.empty() ? 1 : lines.back().no, 1, "missing '#gcs' header");
  const Line& hdr = lines[idx];
  if (!starts_header(hdr.text, "#gcs"))
    parse_fail(hdr.no, first_nonspace(hdr.text) + 1, "expected '#gcs' header");
  auto fields = fields_of(strip_comment(hdr.text, true));
  if (fields.size() != 3) parse_fail(hdr.no, 1, "header must be '#gcs n=<len> L=<count>'");
  std::uint64_t n = parse_kv(fields[1].first, "n", hdr.no, fields[1].second);
  std::uint64_t count = parse_kv(fields[2].first, "L", hdr.no, fields[2].second);
  ++idx;

  std::vector<QSeq> seqs;
  std::size_t max_len = 0;
  while (seqs.size() < count) {
    if (idx >= lines.size())
      parse_fail(lines.back().no, 1,
                 "record truncated: expected " + std::to_string(count) + " sequences, got " +
                     std::to_string(seqs.size()));
    const Line& ln = lines[idx];
    if (starts_header(ln.text, "#gcs"))
      parse_fail(ln.no, 1,
                 "record truncated: expected " + std::to_string(count) + " sequences, got " +
                     std::to_string(seqs.size()));
    if (blank_or_comment(ln.text)) {
      ++idx;
      continue;
    }
    QSeq seq = parse_unit_line(strip_comment(ln.text, false), ln.no);
    if (seq.size() > n)
      parse_fail(ln.no, 1,
                 "sequence has " + std::to_string(seq.size()) + " entries, header says n=" +
                     std::to_string(n));
    max_len = std::max(max_len, seq.size());
    seqs.push_back(std::move(seq));
    ++idx;
  }
  if (count > 0 && max_len != n)
    parse_fail(hdr.no, 1,
               "header says n=" + std::to_string(n) + " but longest sequence has " +
                   std::to_string(max_len) + " entries");
  return seqs;
}

void append_comments(std::string& out, const std::vector<std::string>& comments) {
  for (const auto& c : comments) {
    if (!c.empty() && c[0] == '#')
      out += c;
    else
      out += "# " + c;
    out += '\n';
  }
}

std::string join_units(const QSeq& seq) {
  std::string out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) out += ",";
    out += seq[i].to_string();
  }
  return out;
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out += static_cast<char>((v >> (8 * i)) & 0xff);
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out += static_cast<char>((v >> (8 * i)) & 0xff);
}

struct ByteReader {
  std::string_view bytes;
  std::size_t pos = 0;
  const char* what;

  void need(std::size_t k, const char* field) {
    if (pos + k > bytes.size())
      fail(Errc::ParseError,
           std::string(what) + ": truncated (" + field + " at offset " + std::to_string(pos) + ")");
  }
  std::uint32_t u32(const char* field) {
    need(4, field);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(static_cast<unsigned char>(bytes[pos + i])) << (8 * i);
    pos += 4;
    return v;
  }
  std::uint64_t u64(const char* field) {
    need(8, field);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(static_cast<unsigned char>(bytes[pos + i])) << (8 * i);
    pos += 8;
    return v;
  }
  std::string raw(std::size_t k, const char* field) {
    need(k, field);
    std::string s(bytes.substr(pos, k));
    pos += k;
    return s;
  }
  void expect_magic(std::string_view magic) {
    need(magic.size(), "magic");
    if (bytes.substr(pos, magic.size()) != magic)
      fail(Errc::ParseError, std::string(what) + ": bad magic (expected " + std::string(magic) + ")");
    pos += magic.size();
  }
  void expect_end() {
    if (pos != bytes.size())
      fail(Errc::ParseError, std::string(what) + ": " +
                                 std::to_string(bytes.size() - pos) + " trailing bytes");
  }
};

// ---- plan JSON helpers ----

ordered_json plan_node(const Plan& p) {
  ordered_json j;
  j["kind"] = p.kind;
  j["expect_len"] = p.expect_len;
  j["expect_card"] = p.expect_card;
  if (p.length) j["length"] = p.length;
  if (p.t) j["t"] = p.t;
  if (p.u) j["u"] = p.u;
  if (!p.seed_id.empty()) j["seed_id"] = p.seed_id;
  if (!p.route.empty()) j["route"] = p.route;
  if (p.factor) {
    j["factor"] = p.factor;
    j["factor_base"] = p.factor_base;
    j["factor_g"] = p.factor_g;
  }
  if (p.P) j["P"] = p.P;
  if (!p.digit_vals.empty()) j["digit_vals"] = p.digit_vals;
  if (!p.digit_pows.empty()) j["digit_pows"] = p.digit_pows;
  if (p.pad_sets) j["pad_sets"] = p.pad_sets;
  if (!p.children.empty()) {
    ordered_json arr = ordered_json::array();
    for (const auto& c : p.children) arr.push_back(plan_node(c));
    j["children"] = arr;
  }
  return j;
}

std::uint64_t json_u64(const ordered_json& j, const char* field) {
  if (!j.is_number_unsigned())
    fail(Errc::ParseError, std::string("plan field '") + field + "' must be a non-negative integer");
  return j.get<std::uint64_t>();
}

Plan plan_of_node(const ordered_json& j) {
  if (!j.is_object()) fail(Errc::ParseError, "plan node must be an object");
  Plan p;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    const ordered_json& v = it.value();
    if (key == "kind") {
      if (!v.is_string()) fail(Errc::ParseError, "plan field 'kind' must be a string");
      p.kind = v.get<std::string>();
    } else if (key == "expect_len") {
      p.expect_len = json_u64(v, "expect_len");
    } else if (key == "expect_card") {
      p.expect_card = json_u64(v, "expect_card");
    } else if (key == "length") {
      p.length = json_u64(v, "length");
    } else if (key == "t") {
      p.t = json_u64(v, "t");
    } else if (key == "u") {
      p.u = json_u64(v, "u");
    } else if (key == "seed_id") {
      if (!v.is_string()) fail(Errc::ParseError, "plan field 'seed_id' must be a string");
      p.seed_id = v.get<std::string>();
    } else if (key == "route") {
      if (!v.is_string()) fail(Errc::ParseError, "plan field 'route' must be a string");
      p.route = v.get<std::string>();
    } else if (key == "factor") {
      p.factor = json_u64(v, "factor");
    } else if (key == "factor_base") {
      p.factor_base = json_u64(v, "factor_base");
    } else if (key == "factor_g") {
      p.factor_g = json_u64(v, "factor_g");
    } else if (key == "P") {
      p.P = json_u64(v, "P");
    } else if (key == "digit_vals" || key == "digit_pows") {
      if (!v.is_array()) fail(Errc::ParseError, "plan field '" + key + "' must be an array");
      auto& dst = key == "digit_vals" ? p.digit_vals : p.digit_pows;
      for (const auto& e : v) dst.push_back(json_u64(e, key.c_str()));
    } else if (key == "pad_sets") {
      p.pad_sets = json_u64(v, "pad_sets");
    } else if (key == "children") {
      if (!v.is_array()) fail(Errc::ParseError, "plan field 'children' must be an array");
      for (const auto& e : v) p.children.push_back(plan_of_node(e));
    } else {
      fail(Errc::ParseError, "unknown plan field '" + key + "'");
    }
  }
  if (p.kind.empty()) fail(Errc::ParseError, "plan node missing 'kind'");
  return p;
}

}  // namespace

// ---- sequence text ----

std::string format_sequences(const std::vector<QSeq>& seqs,
                             const std::vector<std::string>& header_comments) {
  std::size_t n = 0;
  for (const auto& s : seqs) n = std::max(n, s.size());
  std::string out;
  append_comments(out, header_comments);
  out += "#gcs n=" + std::to_string(n) + " L=" + std::to_string(seqs.size()) + "\n";
  for (const auto& s : seqs) out += join_units(s) + "\n";
  return out;
}

std::vector<QSeq> parse_sequences(const std::string& text) {
  auto lines = split_lines(text);
  std::size_t idx = 0;
  std::vector<QSeq> seqs = parse_gcs_record(lines, idx);
  while (idx < lines.size()) {
    if (!blank_or_comment(lines[idx].text))
      parse_fail(lines[idx].no, first_nonspace(lines[idx].text) + 1,
                 "unexpected content after the record");
    ++idx;
  }
  return seqs;
}

std::vector<QSeq> read_sequences(const std::string& path) {
  return parse_sequences(read_file(path));
}

std::vector<std::vector<QSeq>> parse_sequence_records(const std::string& text) {
  auto lines = split_lines(text);
  std::vector<std::vector<QSeq>> records;
  std::size_t idx = 0;
  while (idx < lines.size()) {
    if (blank_or_comment(lines[idx].text) && !starts_header(lines[idx].text, "#gcs")) {
      ++idx;
      continue;
    }
    records.push_back(parse_gcs_record(lines, idx));
  }
  return records;
}

std::vector<std::vector<QSeq>> read_corpus_records(const std::string& path) {
  try {
    return parse_sequence_records(read_file(path));
  } catch (const Error& e) {
    if (e.code() == Errc::ParseError)
      fail(Errc::CorpusParse, "corpus " + path + ": " + e.what());
    throw;
  }
}

// ---- SPSeq text ----

std::string format_spseq(const SPSeq& s, const std::vector<std::string>& header_comments) {
  std::string out;
  append_comments(out, header_comments);
  out += "#spseq v=" + std::to_string(s.v) + " n=" + std::to_string(s.size()) + "\n";
  for (const auto& e : s.entries) {
    if (!e) {
      out += "0\n";
      continue;
    }
    out += "perm:";
    for (std::size_t c = 0; c < e->image.size(); ++c) {
      if (c) out += ",";
      out += std::to_string(e->image[c]);
    }
    out += ";sign:";
    for (std::size_t c = 0; c < e->sign.size(); ++c) {
      if (c) out += ",";
      out += std::to_string(int(e->sign[c]));
    }
    out += "\n";
  }
  return out;
}

namespace {

std::vector<std::string_view> split_csv(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = s.find(',', start);
    out.push_back(comma == std::string_view::npos ? s.substr(start)
                                                  : s.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

SignedPerm parse_perm_entry(std::string_view s, std::uint32_t v, std::size_t line_no,
                            std::size_t base_col) {
  constexpr std::string_view kPerm = "perm:";
  constexpr std::string_view kSign = ";sign:";
  if (s.substr(0, kPerm.size()) != kPerm)
    parse_fail(line_no, base_col, "entry must be '0' or 'perm:...;sign:...'");
  std::size_t sign_pos = s.find(kSign);
  if (sign_pos == std::string_view::npos)
    parse_fail(line_no, base_col, "entry missing ';sign:' part");
  std::string_view perm_csv = s.substr(kPerm.size(), sign_pos - kPerm.size());
  std::string_view sign_csv = s.substr(sign_pos + kSign.size());

  SignedPerm x;
  x.v = v;
  auto perm_toks = split_csv(perm_csv);
  auto sign_toks = split_csv(sign_csv);
  if (perm_toks.size() != v || sign_toks.size() != v)
    parse_fail(line_no, base_col,
               "entry needs " + std::to_string(v) + " images and signs, got " +
                   std::to_string(perm_toks.size()) + "/" + std::to_string(sign_toks.size()));
  std::size_t col = base_col + kPerm.size();
  for (auto tok : perm_toks) {
    std::uint64_t img = parse_u64(tok, line_no, col, "a column index");
    if (img >= v) parse_fail(line_no, col, "image " + std::to_string(img) + " out of range");
    x.image.push_back(static_cast<std::uint32_t>(img));
    col += tok.size() + 1;
  }
  col = base_col + kPerm.size() + perm_csv.size() + kSign.size();
  for (auto tok : sign_toks) {
    if (tok == "1")
      x.sign.push_back(1);
    else if (tok == "-1")
      x.sign.push_back(-1);
    else
      parse_fail(line_no, col, "sign must be 1 or -1, got '" + std::string(tok) + "'");
    col += tok.size() + 1;
  }
  if (!sp_valid(x)) parse_fail(line_no, base_col, "image list is not a permutation");
  return x;
}

}  // namespace

SPSeq parse_spseq(const std::string& text) {
  auto lines = split_lines(text);
  std::size_t idx = 0;
  while (idx < lines.size() && !starts_header(lines[idx].text, "#spseq") &&
         blank_or_comment(lines[idx].text))
    ++idx;
  if (idx >= lines.size()) parse_fail(lines.empty() ? 1 : lines.back().no, 1, "missing '#spseq' header");
  const Line& hdr = lines[idx];
  if (!starts_header(hdr.text, "#spseq"))
    parse_fail(hdr.no, first_nonspace(hdr.text) + 1, "expected '#spseq' header");
  auto fields = fields_of(strip_comment(hdr.text, true));
  if (fields.size() != 3) parse_fail(hdr.no, 1, "header must be '#spseq v=<order> n=<len>'");
  std::uint64_t v = parse_kv(fields[1].first, "v", hdr.no, fields[1].second);
  std::uint64_t n = parse_kv(fields[2].first, "n", hdr.no, fields[2].second);
  if (v == 0 || v > (std::uint64_t{1} << 20))
    parse_fail(hdr.no, 1, "order v=" + std::to_string(v) + " out of range");
  ++idx;

  SPSeq s;
  s.v = static_cast<std::uint32_t>(v);
  while (s.entries.size() < n) {
    if (idx >= lines.size())
      parse_fail(lines.back().no, 1,
                 "truncated: expected " + std::to_string(n) + " entries, got " +
                     std::to_string(s.entries.size()));
    const Line& ln = lines[idx];
    if (blank_or_comment(ln.text)) {
      ++idx;
      continue;
    }
    std::string_view body = strip_comment(ln.text, false);
    std::size_t lead = first_nonspace(body);
    std::size_t tail = body.size();
    while (tail > lead && is_space(body[tail - 1])) --tail;
    std::string_view tok = body.substr(lead, tail - lead);
    if (tok == "0")
      s.entries.push_back(std::nullopt);
    else
      s.entries.push_back(parse_perm_entry(tok, s.v, ln.no, lead + 1));
    ++idx;
  }
  while (idx < lines.size()) {
    if (!blank_or_comment(lines[idx].text))
      parse_fail(lines[idx].no, first_nonspace(lines[idx].text) + 1,
                 "unexpected content after the sequence");
    ++idx;
  }
  return s;
}

SPSeq read_spseq(const std::string& path) { return parse_spseq(read_file(path)); }

// ---- matrix text + binary ----

std::string format_matrix(const PMMatrix& h, const std::vector<std::string>& header_comments) {
  std::string out;
  append_comments(out, header_comments);
  out += "order " + std::to_string(h.order);
  if (h.block) out += " block " + std::to_string(h.block);
  out += "\n";
  std::string row(h.order, '+');
  for (std::uint64_t r = 0; r < h.order; ++r) {
    for (std::uint64_t c = 0; c < h.order; ++c) row[c] = h.neg(r, c) ? '-' : '+';
    out += row;
    out += "\n";
  }
  return out;
}

PMMatrix parse_matrix(const std::string& text) {
  auto lines = split_lines(text);
  std::size_t idx = 0;
  while (idx < lines.size() && blank_or_comment(lines[idx].text)) ++idx;
  if (idx >= lines.size()) parse_fail(lines.empty() ? 1 : lines.back().no, 1, "missing 'order' header");
  const Line& hdr = lines[idx];
  auto fields = fields_of(strip_comment(hdr.text, false));
  if (fields.empty() || fields[0].first != "order")
    parse_fail(hdr.no, first_nonspace(hdr.text) + 1, "expected 'order <n>' header");
  if (fields.size() != 2 && fields.size() != 4)
    parse_fail(hdr.no, 1, "header must be 'order <n>' or 'order <n> block <v>'");
  std::uint64_t order = parse_u64(fields[1].first, hdr.no, fields[1].second, "the order");
  std::uint64_t block = 0;
  if (fields.size() == 4) {
    if (fields[2].first != "block")
      parse_fail(hdr.no, fields[2].second, "expected 'block <v>'");
    block = parse_u64(fields[3].first, hdr.no, fields[3].second, "the block size");
  }
  ++idx;

  PMMatrix h = make_pm(order);
  h.block = block;
  std::uint64_t r = 0;
  while (r < order) {
    if (idx >= lines.size())
      parse_fail(lines.back().no, 1,
                 "truncated: expected " + std::to_string(order) + " rows, got " + std::to_string(r));
    const Line& ln = lines[idx];
    if (blank_or_comment(ln.text)) {
      ++idx;
      continue;
    }
    std::string_view body = strip_comment(ln.text, false);
    std::size_t lead = first_nonspace(body);
    std::size_t tail = body.size();
    while (tail > lead && is_space(body[tail - 1])) --tail;
    std::string_view row = body.substr(lead, tail - lead);
    if (row.size() != order)
      parse_fail(ln.no, lead + 1,
                 "row has " + std::to_string(row.size()) + " entries, expected " +
                     std::to_string(order));
    for (std::uint64_t c = 0; c < order; ++c) {
      if (row[c] == '-')
        h.set_neg(r, c);
      else if (row[c] != '+')
        parse_fail(ln.no, lead + c + 1, std::string("bad entry '") + row[c] + "' (expected + or -)");
    }
    ++r;
    ++idx;
  }
  while (idx < lines.size()) {
    if (!blank_or_comment(lines[idx].text))
      parse_fail(lines[idx].no, first_nonspace(lines[idx].text) + 1,
                 "unexpected content after the matrix");
    ++idx;
  }
  return h;
}

PMMatrix read_matrix(const std::string& path) { return parse_matrix(read_file(path)); }

std::string format_matrix_binary(const PMMatrix& h) {
  std::string out;
  out.reserve(20 + 8 * h.bits.size());
  out += "HMAT";
  put_u64(out, h.order);
  put_u64(out, h.block);
  for (std::uint64_t w : h.bits) put_u64(out, w);
  return out;
}

PMMatrix parse_matrix_binary(const std::string& bytes) {
  ByteReader rd{bytes, 0, "matrix cache"};
  rd.expect_magic("HMAT");
  std::uint64_t order = rd.u64("order");
  if (order > (std::uint64_t{1} << 24)) fail(Errc::ParseError, "matrix cache: order too large");
  PMMatrix h = make_pm(order);
  h.block = rd.u64("block");
  for (auto& w : h.bits) w = rd.u64("row words");
  rd.expect_end();
  return h;
}

// ---- LengthSet cache ----

std::string format_lengthset_cache(const LengthSet& s, const std::string& kind) {
  std::string out;
  out.reserve(20 + kind.size() + 8 * s.words().size());
  out += "GLS1";
  put_u32(out, static_cast<std::uint32_t>(kind.size()));
  out += kind;
  put_u64(out, s.bound());
  for (std::uint64_t w : s.words()) put_u64(out, w);
  return out;
}

LengthSet parse_lengthset_cache(const std::string& bytes, std::string* kind) {
  ByteReader rd{bytes, 0, "length-set cache"};
  rd.expect_magic("GLS1");
  std::uint32_t klen = rd.u32("kind length");
  if (klen > 256) fail(Errc::ParseError, "length-set cache: kind tag too long");
  std::string k = rd.raw(klen, "kind tag");
  std::uint64_t bound = rd.u64("bound");
  if (bound > (std::uint64_t{1} << 40)) fail(Errc::ParseError, "length-set cache: bound too large");
  LengthSet s(bound);
  for (auto& w : s.words()) w = rd.u64("bit words");
  rd.expect_end();
  if (kind) *kind = std::move(k);
  return s;
}

// ---- plan JSON ----

std::string plan_to_json(const Plan& plan) { return plan_node(plan).dump(2) + "\n"; }

Plan plan_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(Errc::ParseError, std::string("plan JSON: ") + e.what());
  }
  return plan_of_node(j);
}

// ---- files ----

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::InvalidArgument, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) fail(Errc::InvalidArgument, "read failed for " + path);
  return std::move(ss).str();
}

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::InvalidArgument, "cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) fail(Errc::InvalidArgument, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    fail(Errc::InvalidArgument, "rename to " + path + " failed: " + ec.message());
  }
}

}  // namespace gcs::io
