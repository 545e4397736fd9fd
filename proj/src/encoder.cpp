#include "ils/encoder.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace ils {

namespace {

enum class TokenKind { Word, Quoted, Arrow, Colon, Comma, Equals };

struct Token {
    TokenKind kind;
    std::string text;
};

bool is_word_break(char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == ':' ||
           c == ',' || c == '=' || c == '"' || c == '#';
}

// Tokenizes one line; returns false on a lexical error (unterminated
// quote), with the message in `error`.
bool tokenize(std::string_view line, std::vector<Token>& tokens,
              std::string& error) {
    std::size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '#') break;
        if (c == '"') {
            std::string value;
            ++i;
            bool closed = false;
            while (i < line.size()) {
                if (line[i] == '\\' && i + 1 < line.size()) {
                    value += line[i + 1];
                    i += 2;
                    continue;
                }
                if (line[i] == '"') {
                    closed = true;
                    ++i;
                    break;
                }
                value += line[i++];
            }
            if (!closed) {
                error = "unterminated quote";
                return false;
            }
            tokens.push_back({TokenKind::Quoted, std::move(value)});
            continue;
        }
        if (c == ':') {
            tokens.push_back({TokenKind::Colon, ":"});
            ++i;
            continue;
        }
        if (c == ',') {
            tokens.push_back({TokenKind::Comma, ","});
            ++i;
            continue;
        }
        if (c == '=') {
            tokens.push_back({TokenKind::Equals, "="});
            ++i;
            continue;
        }
        if (c == '-' && i + 1 < line.size() && line[i + 1] == '>') {
            tokens.push_back({TokenKind::Arrow, "->"});
            i += 2;
            continue;
        }
        std::string word;
        while (i < line.size() && !is_word_break(line[i])) {
            if (line[i] == '-' && i + 1 < line.size() && line[i + 1] == '>') break;
            word += line[i++];
        }
        tokens.push_back({TokenKind::Word, std::move(word)});
    }
    return true;
}

// A name token is a label or domain/label pair.
bool valid_reference(std::string_view name) {
    auto slash = name.find('/');
    if (slash == std::string_view::npos) return valid_name(name);
    if (name.find('/', slash + 1) != std::string_view::npos) return false;
    return valid_name(name.substr(0, slash)) &&
           valid_name(name.substr(slash + 1));
}

class LineParser {
public:
    LineParser(std::vector<Token> tokens, std::size_t line, ParseResult& out)
        : tokens_(std::move(tokens)), line_(line), out_(out) {}

    void parse(std::string& context) {
        const Token& head = tokens_.front();
        if (head.kind != TokenKind::Word) {
            fail("expected a keyword");
            return;
        }
        if (head.text == "domain") {
            parse_domain(context);
        } else if (head.text == "knn") {
            parse_knn(context);
        } else if (head.text == "link") {
            parse_link(context);
        } else {
            fail("unknown keyword '" + head.text + "'");
        }
    }

private:
    void parse_domain(std::string& context) {
        const Token* name = take(TokenKind::Word, "domain name");
        if (!name) return;
        if (!valid_name(name->text)) {
            fail("bad domain name '" + name->text + "'");
            return;
        }
        if (!at_end()) {
            fail("trailing tokens after domain declaration");
            return;
        }
        context = name->text;
        EmbedStatement stmt;
        stmt.kind = StatementKind::DomainDecl;
        stmt.domain = context;
        stmt.subject = context;
        stmt.line = line_;
        out_.statements.push_back(std::move(stmt));
    }

    void parse_knn(const std::string& context) {
        const Token* label = take(TokenKind::Word, "label");
        if (!label) return;
        if (!valid_name(label->text)) {
            fail("bad label '" + label->text + "'");
            return;
        }
        EmbedStatement stmt;
        stmt.kind = StatementKind::ConceptDecl;
        stmt.domain = context;
        stmt.subject = label->text;
        stmt.line = line_;
        while (!at_end()) {
            const Token* key = take(TokenKind::Word, "attribute key");
            if (!key) return;
            if (!take(TokenKind::Equals, "'='")) return;
            const Token* value = peek();
            if (!value || (value->kind != TokenKind::Word &&
                           value->kind != TokenKind::Quoted)) {
                fail("expected attribute value");
                return;
            }
            ++pos_;
            stmt.attributes.push_back({key->text, value->text});
        }
        out_.statements.push_back(std::move(stmt));
    }

    void parse_link(const std::string& context) {
        const Token* subject = take(TokenKind::Word, "link source");
        if (!subject) return;
        if (!valid_reference(subject->text)) {
            fail("bad name '" + subject->text + "'");
            return;
        }
        const Token* arrow = peek();
        if (!arrow || arrow->kind != TokenKind::Arrow) {
            fail("missing arrow");
            return;
        }
        ++pos_;
        const Token* object = take(TokenKind::Word, "link destination");
        if (!object) return;
        if (!valid_reference(object->text)) {
            fail("bad name '" + object->text + "'");
            return;
        }
        EmbedStatement stmt;
        stmt.kind = StatementKind::LinkDecl;
        stmt.domain = context;
        stmt.subject = subject->text;
        stmt.object = object->text;
        stmt.line = line_;
        if (!at_end()) {
            if (!take(TokenKind::Colon, "':'")) return;
            if (!parse_properties(stmt)) return;
        }
        if (qualify_name(stmt.subject, context) ==
            qualify_name(stmt.object, context)) {
            fail("self-link '" + stmt.subject + "'");
            return;
        }
        out_.statements.push_back(std::move(stmt));
    }

    bool parse_properties(EmbedStatement& stmt) {
        std::set<PropertyAxis> axes;
        while (true) {
            const Token* prop = take(TokenKind::Word, "property token");
            if (!prop) return false;
            auto polarity = polarity_for_token(prop->text);
            if (!polarity) {
                fail("bad property token '" + prop->text + "'");
                return false;
            }
            if (!axes.insert(polarity->axis).second) {
                fail("duplicate property axis for '" + prop->text + "'");
                return false;
            }
            stmt.properties = stmt.properties.with(polarity->axis,
                                                   polarity->sign);
            if (at_end()) return true;
            if (!take(TokenKind::Comma, "','")) return false;
        }
    }

    const Token* peek() const {
        return pos_ < tokens_.size() ? &tokens_[pos_] : nullptr;
    }

    const Token* take(TokenKind kind, std::string_view what) {
        const Token* token = peek();
        if (!token || token->kind != kind) {
            fail("expected " + std::string(what));
            return nullptr;
        }
        ++pos_;
        return token;
    }

    bool at_end() const { return pos_ >= tokens_.size(); }

    void fail(std::string message) {
        out_.errors.push_back({line_, std::move(message)});
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 1;  // slot 0 is the keyword
    std::size_t line_;
    ParseResult& out_;
};

bool needs_quoting(std::string_view value) {
    if (value.empty()) return true;
    if (value.find("->") != std::string_view::npos) return true;
    return std::any_of(value.begin(), value.end(),
                       [](char c) { return is_word_break(c); });
}

std::string render_value(std::string_view value) {
    if (!needs_quoting(value)) return std::string(value);
    std::string out = "\"";
    for (char c : value) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

ParseResult parse_statements(std::string_view text) {
    ParseResult result;
    std::string context;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        std::string_view line = text.substr(
            start, end == std::string_view::npos ? text.size() - start
                                                 : end - start);
        ++line_no;
        std::vector<Token> tokens;
        std::string lex_error;
        if (!tokenize(line, tokens, lex_error)) {
            result.errors.push_back({line_no, lex_error});
        } else if (!tokens.empty()) {
            LineParser(std::move(tokens), line_no, result).parse(context);
        }
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return result;
}

std::string render_statements(const std::vector<EmbedStatement>& statements) {
    std::string out;
    for (const auto& stmt : statements) {
        switch (stmt.kind) {
            case StatementKind::DomainDecl:
                out += "domain " + stmt.subject;
                break;
            case StatementKind::ConceptDecl:
                out += "knn " + stmt.subject;
                for (const auto& attr : stmt.attributes) {
                    out += " " + attr.key + "=" + render_value(attr.value);
                }
                break;
            case StatementKind::LinkDecl:
                out += "link " + stmt.subject + " -> " + stmt.object;
                if (!stmt.properties.empty()) {
                    out += " : " + stmt.properties.tokens();
                }
                break;
        }
        out += '\n';
    }
    return out;
}

std::pair<std::string, std::string> qualify_name(std::string_view name,
                                                 std::string_view context) {
    auto slash = name.find('/');
    if (slash == std::string_view::npos) {
        return {std::string(context), std::string(name)};
    }
    return {std::string(name.substr(0, slash)),
            std::string(name.substr(slash + 1))};
}

EmbedReport embed(Graph& graph, const std::vector<EmbedStatement>& statements) {
    EmbedReport report;
    report.statements = statements.size();
    std::set<std::pair<std::string, std::string>> seen;

    auto ensure = [&](const std::string& name, const EmbedStatement& stmt,
                      const std::vector<Attribute>& attributes)
        -> std::optional<KnnId> {
        auto [domain, label] = qualify_name(name, stmt.domain);
        if (domain.empty()) {
            report.errors.push_back(
                {stmt.line, "UnknownDomain: '" + name +
                                "' used before any domain declaration"});
            return std::nullopt;
        }
        try {
            bool existed = graph.find_knn(domain, label) != nullptr;
            KnnId id = graph.add_knn(label, domain, attributes);
            if (seen.insert({domain, label}).second) {
                if (existed) {
                    ++report.knns_reused;
                } else {
                    ++report.knns_created;
                }
            }
            return id;
        } catch (const Error& e) {
            report.errors.push_back({stmt.line, e.what()});
            return std::nullopt;
        }
    };

    for (const auto& stmt : statements) {
        switch (stmt.kind) {
            case StatementKind::DomainDecl:
                break;
            case StatementKind::ConceptDecl:
                ensure(stmt.subject, stmt, stmt.attributes);
                break;
            case StatementKind::LinkDecl: {
                if (qualify_name(stmt.subject, stmt.domain).first.empty() ||
                    qualify_name(stmt.object, stmt.domain).first.empty()) {
                    report.errors.push_back(
                        {stmt.line,
                         "UnknownDomain: link declared before any domain"});
                    break;
                }
                auto source = ensure(stmt.subject, stmt, {});
                auto destination = ensure(stmt.object, stmt, {});
                if (!source || !destination) break;
                try {
                    graph.add_link(*source, *destination, stmt.properties);
                    ++report.links_created;
                } catch (const Error& e) {
                    report.errors.push_back({stmt.line, e.what()});
                }
                break;
            }
        }
    }
    return report;
}

std::vector<std::pair<std::string_view, PerformancePolarity>>
property_tokens() {
    std::vector<std::pair<std::string_view, PerformancePolarity>> tokens;
    for (auto axis : {PropertyAxis::Additive, PropertyAxis::Inclusive,
                      PropertyAxis::Integrative}) {
        for (auto sign : {Polarity::Positive, Polarity::Negative}) {
            PerformancePolarity polarity{axis, sign};
            tokens.emplace_back(token_for(polarity), polarity);
        }
    }
    return tokens;
}

}  // namespace ils
