#pragma once
// The knowledge encoder: parses the line-oriented embedding DSL and
// compiles statements into nodes and Natural links.
//
// Grammar (UTF-8, '#' starts a comment, blank lines ignored):
//   domain <name>
//   knn <label> [<key>=<value> ...]
//   link <name> -> <name> [: <prop>[,<prop>...]]
// Names may be qualified as <domain>/<label>; unqualified names bind
// to the most recent domain declaration. Attribute values may be
// double-quoted; backslash escapes \" and \\ inside quotes.

#include "ils/core.hpp"
#include "ils/graph.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ils {

enum class StatementKind { DomainDecl, ConceptDecl, LinkDecl };

struct EmbedStatement {
    StatementKind kind = StatementKind::DomainDecl;
    std::string domain;   // domain context in effect at this statement
    std::string subject;  // declared name or link source, as written
    std::string object;   // link destination, as written (LinkDecl)
    PolaritySet properties;
    std::vector<Attribute> attributes;
    std::size_t line = 0;

    bool operator==(const EmbedStatement&) const = default;
};

struct Diagnostic {
    std::size_t line = 0;
    std::string message;

    bool operator==(const Diagnostic&) const = default;
};

struct ParseResult {
    std::vector<EmbedStatement> statements;
    std::vector<Diagnostic> errors;

    bool ok() const { return errors.empty(); }
};

// Parses the whole input, collecting every error with its line number
// rather than stopping at the first one.
ParseResult parse_statements(std::string_view text);

// Serializes statements back to DSL text, one line per statement.
// parse_statements(render_statements(s)).statements == s for any
// statement list that parsing can produce.
std::string render_statements(const std::vector<EmbedStatement>& statements);

struct EmbedReport {
    std::size_t knns_created = 0;
    std::size_t knns_reused = 0;
    std::size_t links_created = 0;
    std::size_t statements = 0;
    std::vector<Diagnostic> errors;

    bool ok() const { return errors.empty(); }
};

// Compiles parsed statements into the graph: every referenced concept
// is created (or reused) and each link declaration becomes one Natural
// link. Statement order is preserved in the temporal stamps. Errors
// (unknown domain, duplicate links) are collected per line; the
// remaining statements still embed.
EmbedReport embed(Graph& graph, const std::vector<EmbedStatement>& statements);

// The six DSL property tokens and the polarity each maps to.
std::vector<std::pair<std::string_view, PerformancePolarity>> property_tokens();

// Splits a possibly qualified name against a domain context. Returns
// (domain, label); domain is empty when the name is unqualified and no
// context is in effect.
std::pair<std::string, std::string> qualify_name(std::string_view name,
                                                 std::string_view context);

}  // namespace ils
