#pragma once
// Core value types of the knowledge network: node identities, link
// property encoding, links and knowledge threads. Everything here is
// an immutable value; graph storage lives in graph.hpp.

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ils {

// Error codes shared across the engine.
enum class Errc {
    InvalidName,
    UnknownKnn,
    SelfLink,
    DuplicateLink,
    DisconnectedLink,
    CycleViolation,
    UnknownDomain,
    BadVersion,
    CorruptRecord,
    DanglingLink,
    SinkFailure,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, std::string message);

    Errc code() const { return code_; }

private:
    Errc code_;
};

// Identity of a knowledge network node. Ordinals start at 1 and are
// never reused within a graph.
struct KnnId {
    std::uint64_t value = 0;

    constexpr auto operator<=>(const KnnId&) const = default;
};

using LinkId = std::uint64_t;

struct Attribute {
    std::string key;
    std::string value;

    bool operator==(const Attribute&) const = default;
};

// One concept node: canonical label inside a domain (plane), plus
// free-form attributes in first-seen order.
struct Knn {
    KnnId id;
    std::string label;
    std::string domain;
    std::vector<Attribute> attributes;

    bool operator==(const Knn&) const = default;
};

// Labels and domains: non-empty, no whitespace, none of '/', ':', '#'.
bool valid_name(std::string_view text);

// The three signed performance axes, named by their positive pole.
enum class PropertyAxis : std::uint8_t {
    Additive,     // positive adds information, negative negates it
    Inclusive,    // positive is "belongs to", negative excludes
    Integrative,  // positive aggregates parts into a whole
};

enum class Polarity : std::uint8_t { Positive, Negative };

struct PerformancePolarity {
    PropertyAxis axis;
    Polarity sign;

    constexpr auto operator<=>(const PerformancePolarity&) const = default;
};

// The six DSL-facing token names, one per (axis, sign).
std::string_view token_for(PerformancePolarity polarity);
std::optional<PerformancePolarity> polarity_for_token(std::string_view token);

// Set of performance polarities, at most one per axis. Stored as the
// canonical packed byte: two bits per axis (bits 0-1 additive, 2-3
// inclusive, 4-5 integrative; 00 absent, 01 positive, 10 negative).
class PolaritySet {
public:
    constexpr PolaritySet() = default;

    static std::optional<PolaritySet> from_bits(std::uint8_t bits);

    // Returns a copy with the axis set (replacing any previous sign).
    PolaritySet with(PropertyAxis axis, Polarity sign) const;

    std::optional<Polarity> sign_of(PropertyAxis axis) const;
    bool contains(PerformancePolarity polarity) const;
    std::size_t size() const;
    bool empty() const { return bits_ == 0; }

    // Entries in axis order.
    std::vector<PerformancePolarity> entries() const;
    // Comma-joined token names, e.g. "additive,inclusive".
    std::string tokens() const;

    std::uint8_t bits() const { return bits_; }

    constexpr auto operator<=>(const PolaritySet&) const = default;

private:
    explicit constexpr PolaritySet(std::uint8_t bits) : bits_(bits) {}

    std::uint8_t bits_ = 0;
};

// Full link property vector: direction (p1), performance set (p2) and
// the logical embed-order stamp (p3).
struct LinkProperties {
    KnnId source;
    KnnId destination;
    PolaritySet performance;
    std::uint64_t temporal = 0;

    bool operator==(const LinkProperties&) const = default;
};

using LinkSignature = std::uint8_t;

// Canonical packed encoding of the performance set. Injective over the
// 27 axis configurations; bits 6-7 are always zero.
LinkSignature encode_signature(const LinkProperties& properties);

// Inverse of encode_signature; nullopt for bytes that are not a valid
// signature (an axis field of 11, or bits 6-7 set).
std::optional<PolaritySet> decode_signature(LinkSignature signature);

enum class LinkKind : std::uint8_t {
    Natural,    // created by an embed operation
    Unnatural,  // inferred from interconnectivity at retrieval time
};

struct Link {
    LinkId id = 0;
    LinkProperties properties;
    LinkKind kind = LinkKind::Natural;
    bool cross_plane = false;  // endpoint domains differ

    bool operator==(const Link&) const = default;
};

// A simple directed walk from a seed node: no node is visited twice.
// Strength is the link count.
class KnowledgeThread {
public:
    explicit KnowledgeThread(KnnId seed);

    // Builds a thread from a full walk, checking connectivity and the
    // no-revisit rule. Throws DisconnectedLink / CycleViolation.
    static KnowledgeThread from_walk(KnnId seed, std::vector<Link> links);

    KnnId seed() const { return nodes_.front(); }
    KnnId endpoint() const { return nodes_.back(); }
    const std::vector<Link>& links() const { return links_; }
    const std::vector<KnnId>& nodes() const { return nodes_; }
    std::vector<LinkId> link_ids() const;
    bool visits(KnnId id) const;

    bool operator==(const KnowledgeThread&) const = default;

private:
    friend KnowledgeThread append_link(const KnowledgeThread& thread,
                                       const Link& link);

    std::vector<KnnId> nodes_;  // seed followed by each link destination
    std::vector<Link> links_;
};

// Number of links in the thread (the number of summands in its chain).
std::size_t thread_strength(const KnowledgeThread& thread);

// Pure extension: returns a new thread with the link appended. Throws
// DisconnectedLink when the link does not start at the thread endpoint
// and CycleViolation when its destination was already visited.
KnowledgeThread append_link(const KnowledgeThread& thread, const Link& link);

}  // namespace ils
