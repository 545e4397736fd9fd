#pragma once
// Knowledge-thread retrieval: depth-first enumeration of simple
// directed walks from a seed node, with optional admission of
// validated unnatural links, plus the per-seed statistics.

#include "ils/core.hpp"
#include "ils/graph.hpp"

#include <cstddef>
#include <vector>

namespace ils {

struct RetrievalOptions {
    std::size_t max_depth = 16;      // cap on links per thread, >= 1
    bool include_unnatural = false;  // admit validated inferred links
    bool maximal_only = true;        // emit only non-extendable threads
};

struct ThreadStats {
    KnnId seed;
    std::size_t thread_count = 0;
    std::vector<std::size_t> lengths;  // strengths, sorted ascending
    std::size_t cone_level = 0;

    bool operator==(const ThreadStats&) const = default;
};

// Enumerates threads from the seed, following link direction, never
// revisiting a node, up to max_depth links. With maximal_only a thread
// is emitted iff no outgoing link from its endpoint reaches an
// unvisited node or the depth cap is hit; otherwise every prefix is
// emitted. With include_unnatural, inference runs once over the graph
// and accepted proposals are usable during this call only. Output
// order is lexicographic by the temporal stamps of the links taken.
std::vector<KnowledgeThread> retrieve_threads(const Graph& graph, KnnId seed,
                                              const RetrievalOptions& options = {});

ThreadStats thread_stats(const Graph& graph, KnnId seed,
                         const RetrievalOptions& options = {});

// Number of nodes reachable from the given one via directed links,
// excluding the node itself. Zero marks the base of the cone.
std::size_t cone_level(const Graph& graph, KnnId id);

// One ThreadStats row per seed, in input order.
std::vector<ThreadStats> stats_table(const Graph& graph,
                                     const std::vector<KnnId>& seeds,
                                     const RetrievalOptions& options = {});

}  // namespace ils
