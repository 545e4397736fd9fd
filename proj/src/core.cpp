#include "ils/core.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

namespace ils {

namespace {

constexpr std::string_view kReserved = "/:#";

constexpr int axis_shift(PropertyAxis axis) {
    return 2 * static_cast<int>(axis);
}

constexpr std::uint8_t sign_field(Polarity sign) {
    return sign == Polarity::Positive ? 0b01 : 0b10;
}

struct TokenEntry {
    std::string_view token;
    PerformancePolarity polarity;
};

constexpr std::array<TokenEntry, 6> kTokens = {{
    {"additive", {PropertyAxis::Additive, Polarity::Positive}},
    {"subtractive", {PropertyAxis::Additive, Polarity::Negative}},
    {"inclusive", {PropertyAxis::Inclusive, Polarity::Positive}},
    {"exclusive", {PropertyAxis::Inclusive, Polarity::Negative}},
    {"integrative", {PropertyAxis::Integrative, Polarity::Positive}},
    {"differentiative", {PropertyAxis::Integrative, Polarity::Negative}},
}};

}  // namespace

std::string_view errc_name(Errc code) {
    switch (code) {
        case Errc::InvalidName: return "InvalidName";
        case Errc::UnknownKnn: return "UnknownKnn";
        case Errc::SelfLink: return "SelfLink";
        case Errc::DuplicateLink: return "DuplicateLink";
        case Errc::DisconnectedLink: return "DisconnectedLink";
        case Errc::CycleViolation: return "CycleViolation";
        case Errc::UnknownDomain: return "UnknownDomain";
        case Errc::BadVersion: return "BadVersion";
        case Errc::CorruptRecord: return "CorruptRecord";
        case Errc::DanglingLink: return "DanglingLink";
        case Errc::SinkFailure: return "SinkFailure";
    }
    return "Unknown";
}

Error::Error(Errc code, std::string message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message),
      code_(code) {}

bool valid_name(std::string_view text) {
    if (text.empty()) return false;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) return false;
        if (kReserved.find(c) != std::string_view::npos) return false;
    }
    return true;
}

std::string_view token_for(PerformancePolarity polarity) {
    for (const auto& entry : kTokens) {
        if (entry.polarity == polarity) return entry.token;
    }
    return {};
}

std::optional<PerformancePolarity> polarity_for_token(std::string_view token) {
    for (const auto& entry : kTokens) {
        if (entry.token == token) return entry.polarity;
    }
    return std::nullopt;
}

std::optional<PolaritySet> PolaritySet::from_bits(std::uint8_t bits) {
    if (bits & 0b11000000) return std::nullopt;
    for (auto axis : {PropertyAxis::Additive, PropertyAxis::Inclusive,
                      PropertyAxis::Integrative}) {
        if (((bits >> axis_shift(axis)) & 0b11) == 0b11) return std::nullopt;
    }
    return PolaritySet(bits);
}

PolaritySet PolaritySet::with(PropertyAxis axis, Polarity sign) const {
    std::uint8_t bits = bits_;
    bits &= static_cast<std::uint8_t>(~(0b11 << axis_shift(axis)));
    bits |= static_cast<std::uint8_t>(sign_field(sign) << axis_shift(axis));
    return PolaritySet(bits);
}

std::optional<Polarity> PolaritySet::sign_of(PropertyAxis axis) const {
    switch ((bits_ >> axis_shift(axis)) & 0b11) {
        case 0b01: return Polarity::Positive;
        case 0b10: return Polarity::Negative;
        default: return std::nullopt;
    }
}

bool PolaritySet::contains(PerformancePolarity polarity) const {
    return sign_of(polarity.axis) == polarity.sign;
}

std::size_t PolaritySet::size() const {
    std::size_t n = 0;
    for (auto axis : {PropertyAxis::Additive, PropertyAxis::Inclusive,
                      PropertyAxis::Integrative}) {
        if (sign_of(axis)) ++n;
    }
    return n;
}

std::vector<PerformancePolarity> PolaritySet::entries() const {
    std::vector<PerformancePolarity> out;
    for (auto axis : {PropertyAxis::Additive, PropertyAxis::Inclusive,
                      PropertyAxis::Integrative}) {
        if (auto sign = sign_of(axis)) out.push_back({axis, *sign});
    }
    return out;
}

std::string PolaritySet::tokens() const {
    std::string out;
    for (const auto& entry : entries()) {
        if (!out.empty()) out += ',';
        out += token_for(entry);
    }
    return out;
}

LinkSignature encode_signature(const LinkProperties& properties) {
    return properties.performance.bits();
}

std::optional<PolaritySet> decode_signature(LinkSignature signature) {
    return PolaritySet::from_bits(signature);
}

KnowledgeThread::KnowledgeThread(KnnId seed) { nodes_.push_back(seed); }

KnowledgeThread KnowledgeThread::from_walk(KnnId seed, std::vector<Link> links) {
    KnowledgeThread thread(seed);
    for (const auto& link : links) {
        thread = append_link(thread, link);
    }
    return thread;
}

std::vector<LinkId> KnowledgeThread::link_ids() const {
    std::vector<LinkId> ids;
    ids.reserve(links_.size());
    for (const auto& link : links_) ids.push_back(link.id);
    return ids;
}

bool KnowledgeThread::visits(KnnId id) const {
    return std::find(nodes_.begin(), nodes_.end(), id) != nodes_.end();
}

std::size_t thread_strength(const KnowledgeThread& thread) {
    return thread.links().size();
}

KnowledgeThread append_link(const KnowledgeThread& thread, const Link& link) {
    if (link.properties.source != thread.endpoint()) {
        throw Error(Errc::DisconnectedLink,
                    "link source does not match thread endpoint");
    }
    if (thread.visits(link.properties.destination)) {
        throw Error(Errc::CycleViolation,
                    "link destination already visited by thread");
    }
    KnowledgeThread extended = thread;
    extended.nodes_.push_back(link.properties.destination);
    extended.links_.push_back(link);
    return extended;
}

}  // namespace ils
