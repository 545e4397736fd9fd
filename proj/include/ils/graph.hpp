#pragma once
// The graph store: node registry, link database and link manager.
// Natural links are created here at embed time; unnatural links are
// inferred from interconnectivity and admitted through the validation
// rules below.

#include "ils/core.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ils {

enum class LinkDirection { Outgoing, Incoming, Both };

// A candidate unnatural link produced by inference, not yet part of
// the graph. `rule` names the inference rule that proposed it.
struct LinkProposal {
    KnnId source;
    KnnId destination;
    PolaritySet performance;
    std::string rule;

    bool operator==(const LinkProposal&) const = default;
};

struct ValidationResult {
    bool accepted = false;
    std::string reason;  // empty when accepted

    static ValidationResult ok() { return {true, {}}; }
    static ValidationResult rejected(std::string why) {
        return {false, std::move(why)};
    }
};

class Graph {
public:
    Graph() = default;

    // Creates a node, or returns the existing id when (domain, label)
    // is already present. New attribute keys are merged in; existing
    // keys keep their values. Throws InvalidName.
    KnnId add_knn(std::string_view label, std::string_view domain,
                  const std::vector<Attribute>& attributes = {});

    const Knn& knn(KnnId id) const;  // throws UnknownKnn
    const Knn* find_knn(std::string_view domain, std::string_view label) const;
    bool has_knn(KnnId id) const;
    std::size_t knn_count() const { return knns_.size(); }
    const std::map<KnnId, Knn>& knns() const { return knns_; }

    // Creates a Natural link stamped with the next temporal value.
    // Throws UnknownKnn, SelfLink, DuplicateLink (same source,
    // destination and performance set as an existing link).
    const Link& add_link(KnnId source, KnnId destination,
                         PolaritySet performance);

    // Turns an accepted proposal into an Unnatural link with a fresh
    // temporal stamp. Same error surface as add_link.
    const Link& materialize(const LinkProposal& proposal);

    const Link& link(LinkId id) const;
    std::size_t link_count() const { return links_.size(); }
    const std::map<LinkId, Link>& links() const { return links_; }

    // Links touching a node, sorted by temporal stamp ascending.
    std::vector<Link> links_of(KnnId id, LinkDirection direction) const;

    // Drops every Unnatural link and rolls the temporal counter back
    // to one past the highest surviving stamp.
    void remove_unnatural_links();

    std::uint64_t next_temporal() const { return next_temporal_; }

    // Full consistency audit; returns one message per violation,
    // empty when the graph is consistent.
    std::vector<std::string> audit() const;

    // Rebuilds a graph from raw parts (snapshot restore). Indexes are
    // reconstructed and the result must pass the audit; throws
    // CorruptRecord otherwise.
    static Graph assemble(std::vector<Knn> knns, std::vector<Link> links,
                          std::uint64_t next_temporal);

    bool operator==(const Graph& other) const;

private:
    const Link& insert_link(KnnId source, KnnId destination,
                            PolaritySet performance, LinkKind kind);

    std::map<KnnId, Knn> knns_;
    std::map<LinkId, Link> links_;
    std::map<std::pair<std::string, std::string>, KnnId> by_name_;
    std::map<KnnId, std::vector<LinkId>> outgoing_;
    std::map<KnnId, std::vector<LinkId>> incoming_;
    std::uint64_t next_knn_ = 1;
    std::uint64_t next_link_ = 1;
    std::uint64_t next_temporal_ = 1;
};

// Inference rule names.
inline constexpr std::string_view kRuleInclusiveTransitivity =
    "inclusive-transitivity";
inline constexpr std::string_view kRuleIntegrativeLift = "integrative-lift";

// Proposes unnatural links from the interconnectivity of the stored
// ones. Two rules:
//   inclusive-transitivity: the transitive closure of inclusive-
//     positive links; every pair joined by an inclusive chain of two
//     or more links yields a proposal carrying {inclusive positive}.
//   integrative-lift: two nodes whose integrative-positive links meet
//     at a common destination are associated by a performance-empty
//     proposal, directed from lower to higher id.
// Proposals never duplicate existing links and are sorted by source,
// destination, then rule name.
std::vector<LinkProposal> infer_unnatural_links(const Graph& graph);

// The validation sphere: rejects a proposal when a Natural link
// between the same unordered endpoint pair carries a subtractive or
// exclusive entry, or when the proposal duplicates an existing link.
// Throws UnknownKnn for missing endpoints.
ValidationResult validate_link(const Graph& graph,
                               const LinkProposal& proposal);

}  // namespace ils
