#include "astopo/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <tuple>

namespace astopo {
namespace {

struct RawEdge {
  Asn first, second;
  int code;
  std::size_t line;
};

[[noreturn]] void bad_line(std::size_t line, const std::string& text, const std::string& why) {
  throw Error("line " + std::to_string(line) + ": " + why + ": '" + text + "'");
}

bool parse_asn(std::string_view s, Asn& out) {
  if (s.empty()) return false;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

}  // namespace

SnapshotMeta SnapshotMeta::identity(std::size_t n) {
  SnapshotMeta m;
  m.asn_of.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    m.asn_of[i] = i;
    m.id_of.emplace(i, static_cast<NodeId>(i));
  }
  return m;
}

ParsedSnapshot parse_caida(std::istream& in, const std::string& source_path) {
  ParsedSnapshot out;
  out.meta.source_path = source_path;
  std::vector<RawEdge> raw;
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.empty()) continue;
    if (text.front() == '#') {
      out.meta.comment_lines.push_back(text);
      continue;
    }
    std::vector<std::string_view> fields;
    std::string_view rest(text);
    for (;;) {
      const auto bar = rest.find('|');
      fields.push_back(rest.substr(0, bar));
      if (bar == std::string_view::npos) break;
      rest.remove_prefix(bar + 1);
    }
    if (fields.size() < 3) bad_line(line_no, text, "expected A|B|relationship");
    Asn a = 0, b = 0;
    if (!parse_asn(fields[0], a) || !parse_asn(fields[1], b)) bad_line(line_no, text, "bad AS number");
    int code = 0;
    if (fields[2] == "-1") code = -1;
    else if (fields[2] == "0") code = 0;
    else bad_line(line_no, text, "unknown relationship code '" + std::string(fields[2]) + "'");
    if (a == b) bad_line(line_no, text, "self-loop");
    raw.push_back({a, b, code, line_no});
  }
  if (in.bad()) throw IoError("read failure on " + source_path);

  for (const auto& e : raw) {
    out.meta.id_of.emplace(e.first, 0);
    out.meta.id_of.emplace(e.second, 0);
  }
  NodeId next = 0;
  for (auto& [asn, id] : out.meta.id_of) {
    id = next++;
    out.meta.asn_of.push_back(asn);
  }

  // Canonical key per unordered pair; value remembers the relationship.
  // rel: 0 peer, 1 lo is provider of hi, 2 hi is provider of lo.
  struct Keyed {
    NodeId lo, hi;
    int rel;
    std::size_t line;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(raw.size());
  for (const auto& e : raw) {
    const NodeId a = out.meta.id_of.at(e.first), b = out.meta.id_of.at(e.second);
    const NodeId lo = std::min(a, b), hi = std::max(a, b);
    const int rel = e.code == 0 ? 0 : (a == lo ? 1 : 2);
    keyed.push_back({lo, hi, rel, e.line});
  }
  std::stable_sort(keyed.begin(), keyed.end(), [](const Keyed& x, const Keyed& y) {
    return std::tie(x.lo, x.hi) < std::tie(y.lo, y.hi);
  });
  std::vector<PeerPair> peers;
  std::vector<CustomerProvider> cps;
  for (std::size_t i = 0; i < keyed.size(); ++i) {
    const auto& k = keyed[i];
    if (i > 0 && keyed[i - 1].lo == k.lo && keyed[i - 1].hi == k.hi) {
      if (keyed[i - 1].rel != k.rel) {
        throw Error("line " + std::to_string(k.line) + ": relationship between AS " +
                    std::to_string(out.meta.asn_of[k.lo]) + " and AS " +
                    std::to_string(out.meta.asn_of[k.hi]) + " conflicts with line " +
                    std::to_string(keyed[i - 1].line));
      }
      ++out.duplicate_lines;
      continue;
    }
    if (k.rel == 0) peers.push_back({k.lo, k.hi});
    else if (k.rel == 1) cps.push_back({k.hi, k.lo});
    else cps.push_back({k.lo, k.hi});
  }
  out.graph = LabeledAsGraph(out.meta.asn_of.size(), std::move(peers), std::move(cps));
  return out;
}

ParsedSnapshot read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return parse_caida(in, path);
}

void write_graph(const LabeledAsGraph& g, const SnapshotMeta& meta, std::ostream& out,
                 const std::vector<std::string>& header_lines) {
  if (meta.asn_of.size() != g.node_count()) {
    throw Error("write_graph: AS number map does not match the graph");
  }
  for (const auto& c : meta.comment_lines) out << c << '\n';
  for (const auto& h : header_lines) out << (h.starts_with("#") ? "" : "# ") << h << '\n';

  struct Line {
    Asn a, b;
    int code;
  };
  std::vector<Line> lines;
  lines.reserve(g.edge_count());
  for (const auto& e : g.peer_edges()) {
    const Asn x = meta.asn(e.a), y = meta.asn(e.b);
    lines.push_back({std::min(x, y), std::max(x, y), 0});
  }
  for (const auto& e : g.cp_edges()) lines.push_back({meta.asn(e.provider), meta.asn(e.customer), -1});
  std::sort(lines.begin(), lines.end(),
            [](const Line& x, const Line& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });
  for (const auto& l : lines) out << l.a << '|' << l.b << '|' << l.code << '\n';
  if (!out) throw IoError("write failure");
}

void write_graph_file(const LabeledAsGraph& g, const SnapshotMeta& meta, const std::string& path,
                      const std::vector<std::string>& header_lines) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_graph(g, meta, out, header_lines);
  out.flush();
  if (!out) throw IoError("write failure on '" + path + "'");
}

}  // namespace astopo
