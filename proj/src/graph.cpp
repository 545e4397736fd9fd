#include "ils/graph.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <utility>

namespace ils {

namespace {

std::string describe(KnnId id) {
    return "knn " + std::to_string(id.value);
}

}  // namespace

KnnId Graph::add_knn(std::string_view label, std::string_view domain,
                     const std::vector<Attribute>& attributes) {
    if (!valid_name(label)) {
        throw Error(Errc::InvalidName, "bad label '" + std::string(label) + "'");
    }
    if (!valid_name(domain)) {
        throw Error(Errc::InvalidName, "bad domain '" + std::string(domain) + "'");
    }
    auto key = std::make_pair(std::string(domain), std::string(label));
    // first occurrence of a key wins, on creation and on merge alike
    auto merge_into = [](std::vector<Attribute>& into,
                         const std::vector<Attribute>& from) {
        for (const auto& attr : from) {
            bool known = std::any_of(
                into.begin(), into.end(),
                [&](const Attribute& a) { return a.key == attr.key; });
            if (!known) into.push_back(attr);
        }
    };
    if (auto it = by_name_.find(key); it != by_name_.end()) {
        merge_into(knns_.at(it->second).attributes, attributes);
        return it->second;
    }
    KnnId id{next_knn_++};
    Knn node{id, key.second, key.first, {}};
    merge_into(node.attributes, attributes);
    knns_.emplace(id, std::move(node));
    by_name_.emplace(std::move(key), id);
    outgoing_.emplace(id, std::vector<LinkId>{});
    incoming_.emplace(id, std::vector<LinkId>{});
    return id;
}

const Knn& Graph::knn(KnnId id) const {
    auto it = knns_.find(id);
    if (it == knns_.end()) throw Error(Errc::UnknownKnn, describe(id));
    return it->second;
}

const Knn* Graph::find_knn(std::string_view domain,
                           std::string_view label) const {
    auto it = by_name_.find(
        std::make_pair(std::string(domain), std::string(label)));
    if (it == by_name_.end()) return nullptr;
    return &knns_.at(it->second);
}

bool Graph::has_knn(KnnId id) const { return knns_.count(id) != 0; }

const Link& Graph::insert_link(KnnId source, KnnId destination,
                               PolaritySet performance, LinkKind kind) {
    const Knn& src = knn(source);
    const Knn& dst = knn(destination);
    if (source == destination) {
        throw Error(Errc::SelfLink, describe(source));
    }
    for (LinkId id : outgoing_.at(source)) {
        const Link& existing = links_.at(id);
        if (existing.properties.destination == destination &&
            existing.properties.performance == performance) {
            throw Error(Errc::DuplicateLink,
                        describe(source) + " -> " + describe(destination));
        }
    }
    Link link;
    link.id = next_link_++;
    link.properties = {source, destination, performance, next_temporal_++};
    link.kind = kind;
    link.cross_plane = src.domain != dst.domain;
    auto [it, inserted] = links_.emplace(link.id, std::move(link));
    outgoing_.at(source).push_back(it->first);
    incoming_.at(destination).push_back(it->first);
    return it->second;
}

const Link& Graph::add_link(KnnId source, KnnId destination,
                            PolaritySet performance) {
    return insert_link(source, destination, performance, LinkKind::Natural);
}

const Link& Graph::materialize(const LinkProposal& proposal) {
    return insert_link(proposal.source, proposal.destination,
                       proposal.performance, LinkKind::Unnatural);
}

const Link& Graph::link(LinkId id) const {
    auto it = links_.find(id);
    if (it == links_.end()) {
        throw Error(Errc::DanglingLink, "link " + std::to_string(id));
    }
    return it->second;
}

std::vector<Link> Graph::links_of(KnnId id, LinkDirection direction) const {
    if (!has_knn(id)) throw Error(Errc::UnknownKnn, describe(id));
    std::vector<Link> result;
    auto append = [&](const std::vector<LinkId>& ids) {
        for (LinkId link_id : ids) result.push_back(links_.at(link_id));
    };
    if (direction != LinkDirection::Incoming) append(outgoing_.at(id));
    if (direction != LinkDirection::Outgoing) append(incoming_.at(id));
    std::sort(result.begin(), result.end(), [](const Link& a, const Link& b) {
        return a.properties.temporal < b.properties.temporal;
    });
    return result;
}

void Graph::remove_unnatural_links() {
    std::uint64_t highest = 0;
    for (auto it = links_.begin(); it != links_.end();) {
        if (it->second.kind == LinkKind::Unnatural) {
            const LinkProperties& p = it->second.properties;
            auto& out = outgoing_.at(p.source);
            out.erase(std::remove(out.begin(), out.end(), it->first), out.end());
            auto& in = incoming_.at(p.destination);
            in.erase(std::remove(in.begin(), in.end(), it->first), in.end());
            it = links_.erase(it);
        } else {
            highest = std::max(highest, it->second.properties.temporal);
            ++it;
        }
    }
    next_temporal_ = highest + 1;
    if (links_.empty()) {
        next_link_ = 1;
    } else {
        next_link_ = links_.rbegin()->first + 1;
    }
}

std::vector<std::string> Graph::audit() const {
    std::vector<std::string> violations;
    auto report = [&](const std::string& what) { violations.push_back(what); };

    for (const auto& [id, node] : knns_) {
        if (node.id != id) report(describe(id) + ": registry key mismatch");
        if (!valid_name(node.label)) report(describe(id) + ": invalid label");
        if (!valid_name(node.domain)) report(describe(id) + ": invalid domain");
        auto it = by_name_.find(std::make_pair(node.domain, node.label));
        if (it == by_name_.end() || it->second != id) {
            report(describe(id) + ": name index mismatch");
        }
        if (outgoing_.count(id) == 0 || incoming_.count(id) == 0) {
            report(describe(id) + ": missing adjacency entry");
        }
    }
    if (by_name_.size() != knns_.size()) report("name index size mismatch");
    if (outgoing_.size() != knns_.size() || incoming_.size() != knns_.size()) {
        report("adjacency size mismatch");
    }

    std::set<std::uint64_t> stamps;
    for (const auto& [id, link] : links_) {
        const LinkProperties& p = link.properties;
        if (link.id != id) report("link " + std::to_string(id) + ": key mismatch");
        if (!has_knn(p.source) || !has_knn(p.destination)) {
            report("link " + std::to_string(id) + ": dangling endpoint");
            continue;
        }
        if (p.source == p.destination) {
            report("link " + std::to_string(id) + ": self link");
        }
        bool cross = knns_.at(p.source).domain != knns_.at(p.destination).domain;
        if (link.cross_plane != cross) {
            report("link " + std::to_string(id) + ": stale cross_plane flag");
        }
        if (p.temporal >= next_temporal_) {
            report("link " + std::to_string(id) + ": temporal beyond counter");
        }
        if (!stamps.insert(p.temporal).second) {
            report("link " + std::to_string(id) + ": duplicate temporal stamp");
        }
        const auto& out = outgoing_.at(p.source);
        if (std::count(out.begin(), out.end(), id) != 1) {
            report("link " + std::to_string(id) + ": not mirrored outgoing");
        }
        const auto& in = incoming_.at(p.destination);
        if (std::count(in.begin(), in.end(), id) != 1) {
            report("link " + std::to_string(id) + ": not mirrored incoming");
        }
    }

    std::size_t adjacency_total = 0;
    for (const auto& [id, ids] : outgoing_) {
        adjacency_total += ids.size();
        for (LinkId link_id : ids) {
            auto it = links_.find(link_id);
            if (it == links_.end() || it->second.properties.source != id) {
                report(describe(id) + ": stray outgoing entry " +
                       std::to_string(link_id));
            }
        }
    }
    if (adjacency_total != links_.size()) report("outgoing total mismatch");
    adjacency_total = 0;
    for (const auto& [id, ids] : incoming_) {
        adjacency_total += ids.size();
        for (LinkId link_id : ids) {
            auto it = links_.find(link_id);
            if (it == links_.end() || it->second.properties.destination != id) {
                report(describe(id) + ": stray incoming entry " +
                       std::to_string(link_id));
            }
        }
    }
    if (adjacency_total != links_.size()) report("incoming total mismatch");

    return violations;
}

Graph Graph::assemble(std::vector<Knn> knns, std::vector<Link> links,
                      std::uint64_t next_temporal) {
    Graph graph;
    for (auto& node : knns) {
        KnnId id = node.id;
        if (graph.knns_.count(id)) {
            throw Error(Errc::CorruptRecord, "duplicate " + describe(id));
        }
        graph.by_name_.emplace(std::make_pair(node.domain, node.label), id);
        graph.knns_.emplace(id, std::move(node));
        graph.outgoing_.emplace(id, std::vector<LinkId>{});
        graph.incoming_.emplace(id, std::vector<LinkId>{});
        graph.next_knn_ = std::max(graph.next_knn_, id.value + 1);
    }
    for (auto& link : links) {
        if (graph.links_.count(link.id)) {
            throw Error(Errc::CorruptRecord,
                        "duplicate link " + std::to_string(link.id));
        }
        const LinkProperties& p = link.properties;
        if (!graph.has_knn(p.source) || !graph.has_knn(p.destination)) {
            throw Error(Errc::DanglingLink,
                        "link " + std::to_string(link.id) +
                            " references a missing knn");
        }
        link.cross_plane = graph.knns_.at(p.source).domain !=
                           graph.knns_.at(p.destination).domain;
        graph.outgoing_.at(p.source).push_back(link.id);
        graph.incoming_.at(p.destination).push_back(link.id);
        graph.next_link_ = std::max(graph.next_link_, link.id + 1);
        graph.links_.emplace(link.id, std::move(link));
    }
    auto by_temporal = [&](LinkId a, LinkId b) {
        return graph.links_.at(a).properties.temporal <
               graph.links_.at(b).properties.temporal;
    };
    for (auto& [id, ids] : graph.outgoing_) {
        std::sort(ids.begin(), ids.end(), by_temporal);
    }
    for (auto& [id, ids] : graph.incoming_) {
        std::sort(ids.begin(), ids.end(), by_temporal);
    }
    graph.next_temporal_ = next_temporal;

    auto violations = graph.audit();
    if (!violations.empty()) {
        throw Error(Errc::CorruptRecord, violations.front());
    }
    return graph;
}

bool Graph::operator==(const Graph& other) const {
    return knns_ == other.knns_ && links_ == other.links_ &&
           next_temporal_ == other.next_temporal_;
}

namespace {

// Reachability over the subgraph of links carrying one polarity,
// following link direction.
std::map<KnnId, std::set<KnnId>> polar_reachability(
    const Graph& graph, PerformancePolarity polarity) {
    std::map<KnnId, std::set<KnnId>> step;
    for (const auto& [id, link] : graph.links()) {
        if (link.properties.performance.contains(polarity)) {
            step[link.properties.source].insert(link.properties.destination);
        }
    }
    std::map<KnnId, std::set<KnnId>> reach;
    for (const auto& [start, _] : step) {
        std::set<KnnId>& seen = reach[start];
        std::vector<KnnId> stack(step.at(start).begin(), step.at(start).end());
        seen.insert(stack.begin(), stack.end());
        while (!stack.empty()) {
            KnnId node = stack.back();
            stack.pop_back();
            auto it = step.find(node);
            if (it == step.end()) continue;
            for (KnnId next : it->second) {
                if (seen.insert(next).second) stack.push_back(next);
            }
        }
    }
    return reach;
}

bool link_exists(const Graph& graph, KnnId source, KnnId destination,
                 PolaritySet performance) {
    for (const auto& link : graph.links_of(source, LinkDirection::Outgoing)) {
        if (link.properties.destination == destination &&
            link.properties.performance == performance) {
            return true;
        }
    }
    return false;
}

}  // namespace

std::vector<LinkProposal> infer_unnatural_links(const Graph& graph) {
    constexpr PerformancePolarity inclusive{PropertyAxis::Inclusive,
                                            Polarity::Positive};
    const PolaritySet inclusive_only =
        PolaritySet().with(PropertyAxis::Inclusive, Polarity::Positive);

    std::set<std::pair<KnnId, KnnId>> proposed_r1;
    std::set<std::pair<KnnId, KnnId>> proposed_r2;
    std::vector<LinkProposal> proposals;

    // inclusive-transitivity: pairs joined by an inclusive chain of
    // length two or more. Reach-from-neighbors rather than reach-from-
    // self keeps direct single links out.
    auto reach = polar_reachability(graph, inclusive);
    std::map<KnnId, std::set<KnnId>> direct;
    for (const auto& [id, link] : graph.links()) {
        if (link.properties.performance.contains(inclusive)) {
            direct[link.properties.source].insert(link.properties.destination);
        }
    }
    for (const auto& [start, neighbors] : direct) {
        for (KnnId mid : neighbors) {
            auto it = reach.find(mid);
            if (it == reach.end()) continue;
            for (KnnId target : it->second) {
                if (target == start) continue;
                if (!proposed_r1.insert({start, target}).second) continue;
                if (link_exists(graph, start, target, inclusive_only)) continue;
                proposals.push_back({start, target, inclusive_only,
                                     std::string(kRuleInclusiveTransitivity)});
            }
        }
    }

    // integrative-lift: sources whose integrative links meet at the
    // same destination become associated, lower id first.
    std::map<KnnId, std::set<KnnId>> joiners;
    for (const auto& [id, link] : graph.links()) {
        if (link.properties.performance.contains(
                {PropertyAxis::Integrative, Polarity::Positive})) {
            joiners[link.properties.destination].insert(link.properties.source);
        }
    }
    for (const auto& [shared, sources] : joiners) {
        for (auto a = sources.begin(); a != sources.end(); ++a) {
            for (auto b = std::next(a); b != sources.end(); ++b) {
                KnnId low = std::min(*a, *b);
                KnnId high = std::max(*a, *b);
                if (!proposed_r2.insert({low, high}).second) continue;
                if (link_exists(graph, low, high, PolaritySet())) continue;
                proposals.push_back({low, high, PolaritySet(),
                                     std::string(kRuleIntegrativeLift)});
            }
        }
    }

    std::sort(proposals.begin(), proposals.end(),
              [](const LinkProposal& a, const LinkProposal& b) {
                  return std::tie(a.source, a.destination, a.rule) <
                         std::tie(b.source, b.destination, b.rule);
              });
    return proposals;
}

ValidationResult validate_link(const Graph& graph,
                               const LinkProposal& proposal) {
    if (!graph.has_knn(proposal.source)) {
        throw Error(Errc::UnknownKnn, describe(proposal.source));
    }
    if (!graph.has_knn(proposal.destination)) {
        throw Error(Errc::UnknownKnn, describe(proposal.destination));
    }

    bool subtractive = false;
    bool exclusive = false;
    for (const auto& link :
         graph.links_of(proposal.source, LinkDirection::Both)) {
        const LinkProperties& p = link.properties;
        bool between = (p.source == proposal.source &&
                        p.destination == proposal.destination) ||
                       (p.source == proposal.destination &&
                        p.destination == proposal.source);
        if (!between) continue;
        if (p.source == proposal.source &&
            p.performance == proposal.performance) {
            return ValidationResult::rejected(
                link.kind == LinkKind::Natural ? "already-natural"
                                               : "already-materialized");
        }
        if (link.kind != LinkKind::Natural) continue;
        if (p.performance.contains({PropertyAxis::Additive, Polarity::Negative})) {
            subtractive = true;
        }
        if (p.performance.contains({PropertyAxis::Inclusive, Polarity::Negative})) {
            exclusive = true;
        }
    }
    if (subtractive) {
        return ValidationResult::rejected("subtractive-contradiction");
    }
    if (exclusive) {
        return ValidationResult::rejected("exclusive-contradiction");
    }
    return ValidationResult::ok();
}

}  // namespace ils
