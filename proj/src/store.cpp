#include "ils/store.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <vector>

namespace ils {

namespace {

std::string escape_field(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '\t': out += "\\t"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case ';': out += "\\;"; break;
            case '=': out += "\\="; break;
            default: out += c;
        }
    }
    return out;
}

bool unescape_field(std::string_view text, std::string& out) {
    out.clear();
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '\\') {
            out += text[i];
            continue;
        }
        if (++i == text.size()) return false;
        switch (text[i]) {
            case '\\': out += '\\'; break;
            case 't': out += '\t'; break;
            case 'n': out += '\n'; break;
            case 'r': out += '\r'; break;
            case ';': out += ';'; break;
            case '=': out += '='; break;
            default: return false;
        }
    }
    return true;
}

// Splits on a delimiter, honoring backslash escapes.
std::vector<std::string_view> split_escaped(std::string_view text, char delim) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    bool escaped = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (escaped) {
            escaped = false;
        } else if (text[i] == '\\') {
            escaped = true;
        } else if (text[i] == delim) {
            parts.push_back(text.substr(start, i - start));
            start = i + 1;
        }
    }
    parts.push_back(text.substr(start));
    return parts;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        auto tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

bool parse_u64(std::string_view text, std::uint64_t& value) {
    if (text.empty()) return false;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(),
                                     value);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

[[noreturn]] void corrupt(std::size_t line, const std::string& reason) {
    throw Error(Errc::CorruptRecord,
                "line " + std::to_string(line) + ": " + reason);
}

std::string hex_signature(LinkSignature sig) {
    static const char digits[] = "0123456789abcdef";
    return {digits[(sig >> 4) & 0xf], digits[sig & 0xf]};
}

bool parse_hex_signature(std::string_view text, LinkSignature& sig) {
    if (text.size() != 2) return false;
    auto nibble = [](char c, std::uint8_t& out) {
        if (c >= '0' && c <= '9') { out = c - '0'; return true; }
        if (c >= 'a' && c <= 'f') { out = c - 'a' + 10; return true; }
        return false;
    };
    std::uint8_t hi = 0;
    std::uint8_t lo = 0;
    if (!nibble(text[0], hi) || !nibble(text[1], lo)) return false;
    sig = static_cast<LinkSignature>(hi << 4 | lo);
    return true;
}

std::string dot_escape(std::string_view text) {
    std::string out;
    for (char c : text) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace

std::size_t save(const Graph& graph, std::ostream& sink) {
    auto violations = graph.audit();
    if (!violations.empty()) {
        throw Error(Errc::CorruptRecord,
                    "refusing to save inconsistent graph: " + violations.front());
    }
    std::string out;
    out += kSnapshotVersion;
    out += "\n#NODES\n";
    for (const auto& [id, node] : graph.knns()) {
        out += "N\t" + std::to_string(id.value) + "\t" + node.domain + "\t" +
               node.label + "\t";
        bool first = true;
        for (const auto& attr : node.attributes) {
            if (!first) out += ';';
            out += escape_field(attr.key) + "=" + escape_field(attr.value);
            first = false;
        }
        out += '\n';
    }
    out += "#LINKS\n";
    for (const auto& [id, link] : graph.links()) {
        if (link.kind != LinkKind::Natural) continue;
        const LinkProperties& p = link.properties;
        out += "L\t" + std::to_string(id) + "\t" +
               std::to_string(p.source.value) + "\t" +
               std::to_string(p.destination.value) + "\t" +
               hex_signature(encode_signature(p)) + "\t" +
               std::to_string(p.temporal) + "\n";
    }
    out += "#END\t" + std::to_string(graph.next_temporal()) + "\n";

    sink.write(out.data(), static_cast<std::streamsize>(out.size()));
    sink.flush();
    if (!sink) throw Error(Errc::SinkFailure, "snapshot write failed");
    return out.size();
}

Graph load(std::istream& source) {
    std::string text((std::istreambuf_iterator<char>(source)),
                     std::istreambuf_iterator<char>());
    if (source.bad()) throw Error(Errc::SinkFailure, "snapshot read failed");

    std::vector<std::string_view> lines;
    {
        std::string_view rest = text;
        while (!rest.empty()) {
            auto nl = rest.find('\n');
            if (nl == std::string_view::npos) {
                lines.push_back(rest);
                break;
            }
            lines.push_back(rest.substr(0, nl));
            rest.remove_prefix(nl + 1);
        }
    }

    if (lines.empty() || lines[0] != kSnapshotVersion) {
        throw Error(Errc::BadVersion,
                    lines.empty() ? "empty snapshot"
                                  : "unsupported header '" +
                                        std::string(lines[0]) + "'");
    }
    if (lines.size() < 2 || lines[1] != "#NODES") {
        corrupt(2, "expected #NODES");
    }

    std::vector<Knn> knns;
    std::set<std::uint64_t> node_ids;
    std::set<std::pair<std::string, std::string>> names;
    std::size_t i = 2;
    for (; i < lines.size() && lines[i] != "#LINKS"; ++i) {
        std::size_t line_no = i + 1;
        auto fields = split_tabs(lines[i]);
        if (fields.empty() || fields[0] != "N") corrupt(line_no, "expected N record");
        if (fields.size() != 5) corrupt(line_no, "N record needs 5 fields");
        Knn node;
        std::uint64_t id = 0;
        if (!parse_u64(fields[1], id) || id == 0) corrupt(line_no, "bad knn id");
        if (!knns.empty() && knns.back().id.value >= id) {
            corrupt(line_no, "knn ids not ascending");
        }
        node.id = KnnId{id};
        node.domain = std::string(fields[2]);
        node.label = std::string(fields[3]);
        if (!valid_name(node.domain)) corrupt(line_no, "bad domain");
        if (!valid_name(node.label)) corrupt(line_no, "bad label");
        if (!names.insert({node.domain, node.label}).second) {
            corrupt(line_no, "duplicate (domain, label) pair");
        }
        if (!fields[4].empty()) {
            for (auto pair : split_escaped(fields[4], ';')) {
                auto kv = split_escaped(pair, '=');
                if (kv.size() != 2) corrupt(line_no, "bad attribute pair");
                Attribute attr;
                if (!unescape_field(kv[0], attr.key) ||
                    !unescape_field(kv[1], attr.value)) {
                    corrupt(line_no, "bad attribute escape");
                }
                node.attributes.push_back(std::move(attr));
            }
        }
        node_ids.insert(id);
        knns.push_back(std::move(node));
    }
    if (i == lines.size()) corrupt(lines.size(), "missing #LINKS");
    ++i;

    std::vector<Link> links;
    std::set<std::uint64_t> stamps;
    for (; i < lines.size() && !lines[i].starts_with("#END"); ++i) {
        std::size_t line_no = i + 1;
        auto fields = split_tabs(lines[i]);
        if (fields.empty() || fields[0] != "L") corrupt(line_no, "expected L record");
        if (fields.size() != 6) corrupt(line_no, "L record needs 6 fields");
        Link link;
        std::uint64_t id = 0;
        std::uint64_t src = 0;
        std::uint64_t dst = 0;
        std::uint64_t temporal = 0;
        if (!parse_u64(fields[1], id) || id == 0) corrupt(line_no, "bad link id");
        if (!links.empty() && links.back().id >= id) {
            corrupt(line_no, "link ids not ascending");
        }
        if (!parse_u64(fields[2], src)) corrupt(line_no, "bad source id");
        if (!parse_u64(fields[3], dst)) corrupt(line_no, "bad destination id");
        if (!node_ids.count(src)) {
            throw Error(Errc::DanglingLink,
                        "line " + std::to_string(line_no) +
                            ": unknown source knn " + std::to_string(src));
        }
        if (!node_ids.count(dst)) {
            throw Error(Errc::DanglingLink,
                        "line " + std::to_string(line_no) +
                            ": unknown destination knn " + std::to_string(dst));
        }
        if (src == dst) corrupt(line_no, "self link");
        LinkSignature sig = 0;
        if (!parse_hex_signature(fields[4], sig)) {
            corrupt(line_no, "bad signature field");
        }
        auto performance = decode_signature(sig);
        if (!performance) corrupt(line_no, "invalid signature bits");
        if (!parse_u64(fields[5], temporal)) corrupt(line_no, "bad temporal");
        if (!stamps.insert(temporal).second) {
            corrupt(line_no, "duplicate temporal stamp");
        }
        link.id = id;
        link.properties = {KnnId{src}, KnnId{dst}, *performance, temporal};
        link.kind = LinkKind::Natural;
        links.push_back(link);
    }
    if (i == lines.size()) corrupt(lines.size(), "missing #END");

    std::size_t end_line = i + 1;
    auto end_fields = split_tabs(lines[i]);
    std::uint64_t next_temporal = 0;
    if (end_fields.size() != 2 || end_fields[0] != "#END" ||
        !parse_u64(end_fields[1], next_temporal)) {
        corrupt(end_line, "bad #END record");
    }
    if (!stamps.empty() && *stamps.rbegin() >= next_temporal) {
        corrupt(end_line, "next_temporal not beyond stored stamps");
    }
    for (++i; i < lines.size(); ++i) {
        if (!lines[i].empty()) corrupt(i + 1, "content after #END");
    }

    try {
        return Graph::assemble(std::move(knns), std::move(links), next_temporal);
    } catch (const Error& e) {
        if (e.code() == Errc::DanglingLink) throw;
        throw Error(Errc::CorruptRecord, e.what());
    }
}

std::string export_dot(const Graph& graph, const DotOptions& options) {
    std::map<std::string, std::vector<const Knn*>> planes;
    for (const auto& [id, node] : graph.knns()) {
        planes[node.domain].push_back(&node);
    }
    std::string out = "digraph ils {\n  rankdir=LR;\n";
    for (const auto& [domain, nodes] : planes) {
        out += "  subgraph \"cluster_" + dot_escape(domain) + "\" {\n";
        out += "    label=\"" + dot_escape(domain) + "\";\n";
        for (const Knn* node : nodes) {
            out += "    k" + std::to_string(node->id.value) + " [label=\"" +
                   dot_escape(node->domain + "/" + node->label) + "\"];\n";
        }
        out += "  }\n";
    }
    for (const auto& [id, link] : graph.links()) {
        if (link.kind == LinkKind::Unnatural && !options.include_unnatural) {
            continue;
        }
        const LinkProperties& p = link.properties;
        out += "  k" + std::to_string(p.source.value) + " -> k" +
               std::to_string(p.destination.value);
        std::string attrs;
        if (!p.performance.empty()) {
            attrs += "label=\"" + dot_escape(p.performance.tokens()) + "\"";
        }
        if (link.kind == LinkKind::Unnatural) {
            if (!attrs.empty()) attrs += ", ";
            attrs += "style=dashed";
        }
        if (!attrs.empty()) out += " [" + attrs + "]";
        out += ";\n";
    }
    out += "}\n";
    return out;
}

}  // namespace ils
