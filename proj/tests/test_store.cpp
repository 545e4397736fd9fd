#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ils/store.hpp"

#include "oracle.hpp"

#include <random>
#include <sstream>

using namespace ils;
using namespace ils::testing;

namespace {

std::string save_to_string(const Graph& g) {
    std::ostringstream out;
    std::size_t bytes = save(g, out);
    CHECK(bytes == out.str().size());
    return out.str();
}

Graph load_from_string(const std::string& text) {
    std::istringstream in(text);
    return load(in);
}

Graph computer_fact_graph() {
    Graph g;
    KnnId computer = g.add_knn("computer", "computing");
    PolaritySet additive =
        PolaritySet().with(PropertyAxis::Additive, Polarity::Positive);
    for (const char* object : {"store", "retrieve", "process"}) {
        g.add_link(computer, g.add_knn(object, "computing"), additive);
    }
    return g;
}

std::size_t count_lines_starting(const std::string& text,
                                 const std::string& prefix) {
    std::size_t count = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind(prefix, 0) == 0) ++count;
    }
    return count;
}

}  // namespace

TEST_CASE("the empty graph serializes to the fixed canonical form") {
    CHECK(save_to_string(Graph{}) == "ILSv1\n#NODES\n#LINKS\n#END\t1\n");
}

TEST_CASE("the computer-fact corpus writes four node records and three link records") {
    auto text = save_to_string(computer_fact_graph());
    CHECK(count_lines_starting(text, "N\t") == 4);
    CHECK(count_lines_starting(text, "L\t") == 3);
}

TEST_CASE("snapshots round-trip and stay canonical over random graphs") {
    std::mt19937_64 rng(808);
    for (int round = 0; round < 100; ++round) {
        Graph g = random_graph(rng);
        auto text = save_to_string(g);
        Graph loaded = load_from_string(text);
        CHECK(loaded == g);
        CHECK(loaded.audit().empty());
        CHECK(save_to_string(loaded) == text);
    }
}

TEST_CASE("awkward attribute values survive the round trip") {
    Graph g;
    g.add_knn("node", "d",
              {{"tabby", "a\tb"},
               {"semi", "x;y=z"},
               {"multi", "line one\nline two"},
               {"back", "a\\b"},
               {"empty", ""}});
    Graph loaded = load_from_string(save_to_string(g));
    CHECK(loaded == g);
}

TEST_CASE("unknown version tags are rejected before anything else") {
    CHECK_THROWS_AS(load_from_string("ILSv9\n#NODES\n#LINKS\n#END\t1\n"), Error);
    try {
        load_from_string("ILSv9\n#NODES\n#LINKS\n#END\t1\n");
        FAIL("expected BadVersion");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::BadVersion);
    }
    try {
        load_from_string("");
        FAIL("expected BadVersion");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::BadVersion);
    }
}

TEST_CASE("corrupt records carry their line number") {
    // N record with a missing field on line 3
    std::string text = "ILSv1\n#NODES\nN\t1\tcomputing\n#LINKS\n#END\t1\n";
    try {
        load_from_string(text);
        FAIL("expected CorruptRecord");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::CorruptRecord);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("bad signatures, stamps and order are rejected") {
    std::string head = "ILSv1\n#NODES\nN\t1\td\ta\t\nN\t2\td\tb\t\n#LINKS\n";
    auto expect_corrupt = [&](const std::string& body) {
        CHECK_THROWS_AS(load_from_string(head + body), Error);
    };
    expect_corrupt("L\t1\t1\t2\tzz\t1\n#END\t2\n");   // not hex
    expect_corrupt("L\t1\t1\t2\t03\t1\n#END\t2\n");   // axis bits 11
    expect_corrupt("L\t1\t1\t2\t40\t1\n#END\t2\n");   // high bits set
    expect_corrupt("L\t1\t1\t1\t00\t1\n#END\t2\n");   // self link
    expect_corrupt(
        "L\t1\t1\t2\t00\t1\nL\t2\t2\t1\t00\t1\n#END\t2\n");  // stamp reuse
    expect_corrupt(
        "L\t2\t1\t2\t00\t1\nL\t1\t2\t1\t00\t2\n#END\t3\n");  // id order
    expect_corrupt("L\t1\t1\t2\t00\t5\n#END\t2\n");  // stamp beyond counter
}

TEST_CASE("links referencing unknown knns raise DanglingLink") {
    std::string text =
        "ILSv1\n#NODES\nN\t1\td\ta\t\n#LINKS\nL\t1\t1\t99\t00\t1\n#END\t2\n";
    try {
        load_from_string(text);
        FAIL("expected DanglingLink");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::DanglingLink);
    }
}

TEST_CASE("unnatural links never reach the snapshot") {
    Graph g;
    KnnId a = g.add_knn("a", "d");
    KnnId b = g.add_knn("b", "d");
    KnnId c = g.add_knn("c", "d");
    PolaritySet inclusive =
        PolaritySet().with(PropertyAxis::Inclusive, Polarity::Positive);
    g.add_link(a, b, inclusive);
    g.add_link(b, c, inclusive);
    Graph natural_only = g;
    for (const auto& proposal : infer_unnatural_links(g)) {
        if (validate_link(g, proposal).accepted) g.materialize(proposal);
    }
    REQUIRE(g.link_count() == 3);
    auto text = save_to_string(g);
    CHECK(count_lines_starting(text, "L\t") == 2);
    // the natural part round-trips; only the counter reflects history
    Graph loaded = load_from_string(text);
    CHECK(loaded.knns() == natural_only.knns());
    CHECK(loaded.links() == natural_only.links());
}

TEST_CASE("mutated snapshots either load consistently or fail cleanly") {
    std::mt19937_64 rng(0xbadf11e);
    Graph g = random_graph(rng, {.min_nodes = 3, .max_nodes = 8,
                                 .max_links = 12, .domains = 2});
    const std::string pristine = save_to_string(g);
    std::uniform_int_distribution<std::size_t> pos(0, pristine.size() - 1);
    std::uniform_int_distribution<int> printable(32, 126);
    for (int round = 0; round < 400; ++round) {
        std::string mutated = pristine;
        switch (round % 3) {
            case 0:  // flip one byte
                mutated[pos(rng)] = static_cast<char>(printable(rng));
                break;
            case 1:  // delete a span
                mutated.erase(pos(rng) % mutated.size(),
                              1 + pos(rng) % 20);
                break;
            default:  // duplicate a span
                mutated.insert(pos(rng), pristine.substr(pos(rng), 10));
                break;
        }
        try {
            Graph loaded = load_from_string(mutated);
            CHECK(loaded.audit().empty());
        } catch (const Error& e) {
            bool expected = e.code() == Errc::BadVersion ||
                            e.code() == Errc::CorruptRecord ||
                            e.code() == Errc::DanglingLink;
            CHECK_MESSAGE(expected, e.what());
        }
    }
}

TEST_CASE("dot export of the empty graph is a bare digraph") {
    auto dot = export_dot(Graph{});
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("k1") == std::string::npos);
    CHECK(dot.find("->") == std::string::npos);
}

TEST_CASE("dot export clusters planes and labels edges") {
    Graph g;
    KnnId botany = g.add_knn("botany", "biology");
    KnnId computer = g.add_knn("computer", "computing");
    PolaritySet inclusive =
        PolaritySet().with(PropertyAxis::Inclusive, Polarity::Positive);
    g.add_link(botany, computer, inclusive);
    auto dot = export_dot(g);
    CHECK(count_lines_starting(dot, "  subgraph \"cluster_") == 2);
    CHECK(dot.find("label=\"biology\"") != std::string::npos);
    CHECK(dot.find("label=\"computing\"") != std::string::npos);
    CHECK(dot.find("k1 -> k2 [label=\"inclusive\"]") != std::string::npos);
    CHECK(dot.find("biology/botany") != std::string::npos);
}

TEST_CASE("dot export shows the computer fact as one cluster of additive edges") {
    auto dot = export_dot(computer_fact_graph());
    CHECK(count_lines_starting(dot, "  subgraph \"cluster_") == 1);
    std::size_t additive = 0;
    std::size_t pos = 0;
    while ((pos = dot.find("label=\"additive\"", pos)) != std::string::npos) {
        ++additive;
        ++pos;
    }
    CHECK(additive == 3);
}

TEST_CASE("unnatural edges render dashed and only when requested") {
    Graph g;
    KnnId a = g.add_knn("a", "d");
    KnnId b = g.add_knn("b", "d");
    KnnId c = g.add_knn("c", "d");
    PolaritySet inclusive =
        PolaritySet().with(PropertyAxis::Inclusive, Polarity::Positive);
    g.add_link(a, b, inclusive);
    g.add_link(b, c, inclusive);
    for (const auto& proposal : infer_unnatural_links(g)) {
        if (validate_link(g, proposal).accepted) g.materialize(proposal);
    }
    auto hidden = export_dot(g);
    CHECK(hidden.find("dashed") == std::string::npos);
    CHECK(hidden.find("k1 -> k3") == std::string::npos);
    auto shown = export_dot(g, {.include_unnatural = true});
    CHECK(shown.find("k1 -> k3 [label=\"inclusive\", style=dashed]") !=
          std::string::npos);
}
