#include "ils/threader.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace ils {

namespace {

class Enumerator {
public:
    Enumerator(const Graph& graph, KnnId seed, const RetrievalOptions& options)
        : graph_(graph), options_(options), seed_(seed) {}

    std::vector<KnowledgeThread> run() {
        visited_.insert(seed_);
        descend(seed_, 0);
        return std::move(threads_);
    }

private:
    void descend(KnnId node, std::size_t depth) {
        std::vector<Link> usable;
        for (const auto& link : graph_.links_of(node, LinkDirection::Outgoing)) {
            if (!visited_.count(link.properties.destination)) {
                usable.push_back(link);
            }
        }
        bool at_cap = depth >= options_.max_depth;
        if (!options_.maximal_only || usable.empty() || at_cap) {
            threads_.push_back(KnowledgeThread::from_walk(seed_, path_));
        }
        if (at_cap) return;
        for (const auto& link : usable) {
            visited_.insert(link.properties.destination);
            path_.push_back(link);
            descend(link.properties.destination, depth + 1);
            path_.pop_back();
            visited_.erase(link.properties.destination);
        }
    }

    const Graph& graph_;
    const RetrievalOptions& options_;
    KnnId seed_;
    std::set<KnnId> visited_;
    std::vector<Link> path_;
    std::vector<KnowledgeThread> threads_;
};

}  // namespace

std::vector<KnowledgeThread> retrieve_threads(const Graph& graph, KnnId seed,
                                              const RetrievalOptions& options) {
    if (options.max_depth < 1) {
        throw std::invalid_argument("max_depth must be at least 1");
    }
    graph.knn(seed);  // throws UnknownKnn
    if (!options.include_unnatural) {
        return Enumerator(graph, seed, options).run();
    }
    // Inference runs once over the stored links; accepted proposals are
    // materialized into a working copy that dies with this call.
    Graph working = graph;
    for (const auto& proposal : infer_unnatural_links(working)) {
        if (validate_link(working, proposal).accepted) {
            working.materialize(proposal);
        }
    }
    return Enumerator(working, seed, options).run();
}

ThreadStats thread_stats(const Graph& graph, KnnId seed,
                         const RetrievalOptions& options) {
    ThreadStats stats;
    stats.seed = seed;
    for (const auto& thread : retrieve_threads(graph, seed, options)) {
        stats.lengths.push_back(thread_strength(thread));
    }
    std::sort(stats.lengths.begin(), stats.lengths.end());
    stats.thread_count = stats.lengths.size();
    stats.cone_level = cone_level(graph, seed);
    return stats;
}

std::size_t cone_level(const Graph& graph, KnnId id) {
    graph.knn(id);  // throws UnknownKnn
    std::set<KnnId> visited{id};
    std::vector<KnnId> frontier{id};
    while (!frontier.empty()) {
        KnnId node = frontier.back();
        frontier.pop_back();
        for (const auto& link : graph.links_of(node, LinkDirection::Outgoing)) {
            if (visited.insert(link.properties.destination).second) {
                frontier.push_back(link.properties.destination);
            }
        }
    }
    return visited.size() - 1;
}

std::vector<ThreadStats> stats_table(const Graph& graph,
                                     const std::vector<KnnId>& seeds,
                                     const RetrievalOptions& options) {
    std::vector<ThreadStats> rows;
    rows.reserve(seeds.size());
    for (KnnId seed : seeds) {
        rows.push_back(thread_stats(graph, seed, options));
    }
    return rows;
}

}  // namespace ils
