#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ils/encoder.hpp"

#include <random>

using namespace ils;

namespace {

const std::string kComputerFactDsl =
    "domain computing\n"
    "link computer -> store : additive\n"
    "link computer -> retrieve : additive\n"
    "link computer -> process : additive\n";

std::vector<EmbedStatement> parsed_ok(const std::string& text) {
    auto result = parse_statements(text);
    REQUIRE(result.ok());
    return result.statements;
}

}  // namespace

TEST_CASE("domain plus link parse into two statements") {
    auto statements =
        parsed_ok("domain computing\nlink computer -> store : additive");
    REQUIRE(statements.size() == 2);
    CHECK(statements[0].kind == StatementKind::DomainDecl);
    CHECK(statements[0].domain == "computing");
    CHECK(statements[0].line == 1);
    CHECK(statements[1].kind == StatementKind::LinkDecl);
    CHECK(statements[1].subject == "computer");
    CHECK(statements[1].object == "store");
    CHECK(statements[1].domain == "computing");
    CHECK(statements[1].properties ==
          PolaritySet().with(PropertyAxis::Additive, Polarity::Positive));
    CHECK(statements[1].line == 2);
}

TEST_CASE("empty input parses to nothing") {
    auto result = parse_statements("");
    CHECK(result.ok());
    CHECK(result.statements.empty());
}

TEST_CASE("comments and blank lines are skipped, hash binds inside quotes") {
    auto statements = parsed_ok(
        "# header comment\n"
        "\n"
        "domain d   # trailing comment\n"
        "knn node note=\"keep # this\"\n");
    REQUIRE(statements.size() == 2);
    CHECK(statements[1].attributes ==
          std::vector<Attribute>{{"note", "keep # this"}});
}

TEST_CASE("a link from a concept to itself is a parse error") {
    auto result = parse_statements("link a -> a : additive");
    CHECK(result.statements.empty());
    REQUIRE(result.errors.size() == 1);
    CHECK(result.errors[0].line == 1);
    CHECK(result.errors[0].message.find("self-link") != std::string::npos);
}

TEST_CASE("qualified self reference is caught against the context") {
    auto result = parse_statements("domain x\nlink x/a -> a : additive");
    REQUIRE(result.errors.size() == 1);
    CHECK(result.errors[0].line == 2);
}

TEST_CASE("parsing reports every error with its line and keeps going") {
    auto result = parse_statements(
        "domain d\n"
        "frobnicate a b\n"
        "link a -> b : sideways\n"
        "link a b : additive\n"
        "knn c note=\"unterminated\n"
        "link a -> c : additive\n");
    REQUIRE(result.errors.size() == 4);
    CHECK(result.errors[0].line == 2);
    CHECK(result.errors[0].message.find("unknown keyword") != std::string::npos);
    CHECK(result.errors[1].line == 3);
    CHECK(result.errors[1].message.find("bad property token") !=
          std::string::npos);
    CHECK(result.errors[2].line == 4);
    CHECK(result.errors[2].message.find("missing arrow") != std::string::npos);
    CHECK(result.errors[3].line == 5);
    CHECK(result.errors[3].message.find("unterminated quote") !=
          std::string::npos);
    // the two well-formed statements still came through
    CHECK(result.statements.size() == 2);
}

TEST_CASE("multiple properties parse, one axis each") {
    auto statements =
        parsed_ok("domain d\nlink a -> b : additive,integrative");
    CHECK(statements[1].properties ==
          PolaritySet()
              .with(PropertyAxis::Additive, Polarity::Positive)
              .with(PropertyAxis::Integrative, Polarity::Positive));

    auto bad = parse_statements("domain d\nlink a -> b : additive,subtractive");
    REQUIRE(bad.errors.size() == 1);
    CHECK(bad.errors[0].message.find("duplicate property axis") !=
          std::string::npos);
}

TEST_CASE("a link without a property clause carries the empty set") {
    auto statements = parsed_ok("domain d\nlink a -> b");
    CHECK(statements[1].properties == PolaritySet());
}

TEST_CASE("property_tokens exposes the six-token bijection") {
    auto tokens = property_tokens();
    REQUIRE(tokens.size() == 6);
    auto find = [&](std::string_view name) {
        for (const auto& [token, polarity] : tokens) {
            if (token == name) return polarity;
        }
        FAIL("missing token ", name);
        return PerformancePolarity{};
    };
    CHECK(find("additive") ==
          PerformancePolarity{PropertyAxis::Additive, Polarity::Positive});
    CHECK(find("subtractive") ==
          PerformancePolarity{PropertyAxis::Additive, Polarity::Negative});
    CHECK(find("inclusive") ==
          PerformancePolarity{PropertyAxis::Inclusive, Polarity::Positive});
    CHECK(find("exclusive") ==
          PerformancePolarity{PropertyAxis::Inclusive, Polarity::Negative});
    CHECK(find("integrative") ==
          PerformancePolarity{PropertyAxis::Integrative, Polarity::Positive});
    CHECK(find("differentiative") ==
          PerformancePolarity{PropertyAxis::Integrative, Polarity::Negative});
}

TEST_CASE("embedding the computer fact creates four knns and three links") {
    Graph g;
    auto report = embed(g, parsed_ok(kComputerFactDsl));
    CHECK(report.knns_created == 4);
    CHECK(report.knns_reused == 0);
    CHECK(report.links_created == 3);
    CHECK(report.statements == 4);
    CHECK(report.ok());
    const Knn* computer = g.find_knn("computing", "computer");
    REQUIRE(computer != nullptr);
    CHECK(g.links_of(computer->id, LinkDirection::Outgoing).size() == 3);
    for (const auto& [id, link] : g.links()) {
        CHECK(link.kind == LinkKind::Natural);
    }
}

TEST_CASE("re-embedding the same file reuses knns and reports the duplicate") {
    const std::string dsl = "domain botany\nlink big -> leaves : additive\n";
    Graph g;
    auto first = embed(g, parsed_ok(dsl));
    CHECK(first.knns_created == 2);
    CHECK(first.links_created == 1);
    Graph after_first = g;

    auto second = embed(g, parsed_ok(dsl));
    CHECK(second.knns_created == 0);
    CHECK(second.knns_reused == 2);
    CHECK(second.links_created == 0);
    REQUIRE(second.errors.size() == 1);
    CHECK(second.errors[0].message.find("DuplicateLink") != std::string::npos);
    CHECK(g == after_first);  // dedup-stable
}

TEST_CASE("a negated fact embeds as a subtractive link") {
    Graph g;
    embed(g, parsed_ok("domain botany\nlink stand -> straight : subtractive"));
    REQUIRE(g.link_count() == 1);
    CHECK(g.links().begin()->second.properties.performance ==
          PolaritySet().with(PropertyAxis::Additive, Polarity::Negative));
}

TEST_CASE("link declarations before any domain report UnknownDomain") {
    Graph g;
    auto report = embed(g, parsed_ok("link a -> b : additive"));
    CHECK(report.links_created == 0);
    CHECK(report.knns_created == 0);
    REQUIRE(report.errors.size() == 1);
    CHECK(report.errors[0].line == 1);
    CHECK(report.errors[0].message.find("UnknownDomain") != std::string::npos);
}

TEST_CASE("qualified names reach across domains") {
    Graph g;
    auto report = embed(g, parsed_ok("domain biology\n"
                                     "link botany -> biology : inclusive\n"
                                     "domain computing\n"
                                     "link computer -> biology/botany\n"));
    CHECK(report.ok());
    CHECK(report.knns_created == 3);
    const Knn* botany = g.find_knn("biology", "botany");
    REQUIRE(botany != nullptr);
    auto incoming = g.links_of(botany->id, LinkDirection::Incoming);
    REQUIRE(incoming.size() == 1);
    CHECK(incoming[0].cross_plane);
}

TEST_CASE("a conjunction of n objects yields n links and n+1 knns") {
    for (int n = 1; n <= 6; ++n) {
        std::string dsl = "domain d\n";
        for (int i = 0; i < n; ++i) {
            dsl += "link subject -> object" + std::to_string(i) + " : additive\n";
        }
        Graph g;
        auto report = embed(g, parsed_ok(dsl));
        CHECK(report.links_created == static_cast<std::size_t>(n));
        CHECK(report.knns_created == static_cast<std::size_t>(n) + 1);
        CHECK(report.knns_created + report.knns_reused ==
              static_cast<std::size_t>(n) + 1);
    }
}

TEST_CASE("knn declarations attach attributes and merge on reuse") {
    Graph g;
    auto report = embed(g, parsed_ok("domain d\n"
                                     "knn leaf color=green size=\"very big\"\n"
                                     "knn leaf color=brown\n"));
    CHECK(report.knns_created == 1);
    CHECK(report.knns_reused == 0);  // one distinct reference
    const Knn* leaf = g.find_knn("d", "leaf");
    REQUIRE(leaf != nullptr);
    REQUIRE(leaf->attributes.size() == 2);
    CHECK(leaf->attributes[0] == Attribute{"color", "green"});
    CHECK(leaf->attributes[1] == Attribute{"size", "very big"});
}

TEST_CASE("the parser survives arbitrary input without throwing") {
    std::mt19937_64 rng(0xf022);
    std::uniform_int_distribution<int> len(0, 200);
    std::uniform_int_distribution<int> byte(1, 255);
    std::uniform_int_distribution<int> structured(0, 1);
    static const char* fragments[] = {"domain", "knn",  "link", "->", ":",
                                      ",",      "=",    "\"",   "#",  "\n",
                                      " ",      "a/b",  "a",    "\t", "/"};
    for (int round = 0; round < 500; ++round) {
        std::string input;
        if (structured(rng)) {
            std::uniform_int_distribution<int> frag(
                0, std::size(fragments) - 1);
            for (int i = 0, n = len(rng) / 4; i < n; ++i) {
                input += fragments[frag(rng)];
            }
        } else {
            for (int i = 0, n = len(rng); i < n; ++i) {
                input += static_cast<char>(byte(rng));
            }
        }
        auto result = parse_statements(input);  // must not throw
        Graph g;
        embed(g, result.statements);            // nor may embedding
        CHECK(g.audit().empty());
    }
}

TEST_CASE("statements round-trip through render and parse") {
    std::mt19937_64 rng(20240811);
    std::uniform_int_distribution<int> coin(0, 1);
    std::uniform_int_distribution<int> kind_pick(0, 2);
    std::uniform_int_distribution<int> word_len(1, 8);
    std::uniform_int_distribution<int> prop_count(0, 3);
    auto word = [&] {
        static const char alphabet[] =
            "abcdefghijklmnopqrstuvwxyz0123456789_-";
        std::uniform_int_distribution<int> pick(0, sizeof(alphabet) - 2);
        std::string w;
        for (int i = 0, n = word_len(rng); i < n; ++i) w += alphabet[pick(rng)];
        return w;
    };
    auto value = [&] {
        // attribute values may hold spaces, quotes, punctuation
        static const char alphabet[] =
            "abc XYZ\"\\#:,=->;/09";
        std::uniform_int_distribution<int> pick(0, sizeof(alphabet) - 2);
        std::uniform_int_distribution<int> len(0, 10);
        std::string v;
        for (int i = 0, n = len(rng); i < n; ++i) v += alphabet[pick(rng)];
        return v;
    };

    for (int round = 0; round < 100; ++round) {
        std::vector<EmbedStatement> statements;
        std::string context;
        std::uniform_int_distribution<int> count(0, 12);
        int n = count(rng);
        for (int i = 0; i < n; ++i) {
            EmbedStatement stmt;
            stmt.line = statements.size() + 1;
            int kind = context.empty() ? 0 : kind_pick(rng);
            if (kind == 0) {
                stmt.kind = StatementKind::DomainDecl;
                context = word();
                stmt.domain = context;
                stmt.subject = context;
            } else if (kind == 1) {
                stmt.kind = StatementKind::ConceptDecl;
                stmt.domain = context;
                stmt.subject = word();
                for (int a = 0, m = coin(rng) + coin(rng); a < m; ++a) {
                    stmt.attributes.push_back({word(), value()});
                }
            } else {
                stmt.kind = StatementKind::LinkDecl;
                stmt.domain = context;
                stmt.subject = word();
                stmt.object = coin(rng) ? word() : word() + "/" + word();
                if (qualify_name(stmt.subject, context) ==
                    qualify_name(stmt.object, context)) {
                    continue;  // regenerate next round; self-links do not parse
                }
                for (int p = 0, m = prop_count(rng); p < m; ++p) {
                    auto tokens = property_tokens();
                    stmt.properties = stmt.properties.with(
                        tokens[p * 2].second.axis,
                        coin(rng) ? Polarity::Positive : Polarity::Negative);
                }
            }
            statements.push_back(std::move(stmt));
        }
        // renumber after possible skips
        for (std::size_t i = 0; i < statements.size(); ++i) {
            statements[i].line = i + 1;
        }
        auto rendered = render_statements(statements);
        auto reparsed = parse_statements(rendered);
        REQUIRE_MESSAGE(reparsed.ok(), rendered);
        CHECK(reparsed.statements == statements);
    }
}
