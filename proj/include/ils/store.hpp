#pragma once
// Snapshot persistence and graph export.
//
// ILSv1 snapshot format (UTF-8, LF, tab-separated, records sorted by
// id within each section):
//   ILSv1
//   #NODES
//   N<TAB>id<TAB>domain<TAB>label<TAB>key=value[;key=value...]
//   #LINKS
//   L<TAB>id<TAB>srcId<TAB>dstId<TAB>sig<TAB>temporal
//   #END<TAB>next_temporal
// `sig` is the two-hex-digit link signature. Attribute keys and values
// escape backslash, tab, newline, ';' and '='. Snapshots hold Natural
// links only; equal graphs serialize to byte-identical files.

#include "ils/core.hpp"
#include "ils/graph.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>

namespace ils {

inline constexpr std::string_view kSnapshotVersion = "ILSv1";

// Writes the canonical snapshot; returns the number of bytes written.
// Throws SinkFailure on stream errors.
std::size_t save(const Graph& graph, std::ostream& sink);

// Parses a snapshot and rebuilds the graph, adjacency included.
// Throws BadVersion, CorruptRecord (with line number) or DanglingLink.
Graph load(std::istream& source);

struct DotOptions {
    bool include_unnatural = false;
};

// Emits a Graphviz digraph: one node per KNN labeled domain/label,
// clustered by domain, edges labeled with their property tokens.
// Unnatural links render dashed and only appear when requested.
std::string export_dot(const Graph& graph, const DotOptions& options = {});

}  // namespace ils
