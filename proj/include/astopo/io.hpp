#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "astopo/graph.hpp"

namespace astopo {

using Asn = std::uint64_t;

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Where a graph came from and how dense ids map to external AS numbers.
struct SnapshotMeta {
  std::string source_path;
  std::vector<std::string> comment_lines;  // verbatim, including the leading '#'
  std::vector<Asn> asn_of;                 // dense id -> AS number, ascending
  std::map<Asn, NodeId> id_of;             // AS number -> dense id

  /// Identity numbering 0..n-1, for generated graphs.
  static SnapshotMeta identity(std::size_t n);
  Asn asn(NodeId u) const { return asn_of.at(u); }
};

struct ParsedSnapshot {
  LabeledAsGraph graph;
  SnapshotMeta meta;
  std::size_t duplicate_lines = 0;
};

/// Pipe-delimited relationship lines: `A|B|-1` (B is a customer of A) and
/// `A|B|0` (peers). Extra trailing fields are ignored; '#' lines are kept
/// as comments; blank lines are skipped. Dense ids follow ascending AS
/// number. Throws Error naming the line on malformed input or conflicting
/// relationships.
ParsedSnapshot parse_caida(std::istream& in, const std::string& source_path = "<stream>");
ParsedSnapshot read_graph_file(const std::string& path);

/// Writes `meta.comment_lines`, then `header_lines` (each prefixed with "# "
/// unless it already starts with '#'), then one line per edge sorted by AS
/// numbers. Throws IoError if the stream fails.
void write_graph(const LabeledAsGraph& g, const SnapshotMeta& meta, std::ostream& out,
                 const std::vector<std::string>& header_lines = {});
void write_graph_file(const LabeledAsGraph& g, const SnapshotMeta& meta, const std::string& path,
                      const std::vector<std::string>& header_lines = {});

}  // namespace astopo
