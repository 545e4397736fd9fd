#include "ils/cli.hpp"

#include "ils/encoder.hpp"
#include "ils/graph.hpp"
#include "ils/store.hpp"
#include "ils/threader.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;

namespace ils::cli {

namespace {

constexpr int kOk = 0;
constexpr int kDomainError = 1;
constexpr int kUsageError = 2;

Graph load_snapshot(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(Errc::SinkFailure,
                    "cannot open snapshot '" + path.string() + "'");
    }
    return load(in);
}

Graph load_required(const fs::path& path) {
    if (!fs::exists(path)) {
        throw Error(Errc::SinkFailure,
                    "snapshot not found: '" + path.string() + "'");
    }
    return load_snapshot(path);
}

// Write-to-temp plus rename keeps the previous snapshot intact if
// anything goes wrong mid-write.
void save_snapshot_atomic(const Graph& graph, const fs::path& path) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error(Errc::SinkFailure,
                        "cannot write '" + tmp.string() + "'");
        }
        save(graph, out);
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw Error(Errc::SinkFailure, "rename failed: " + ec.message());
    }
}

std::string qualified(const Knn& knn) { return knn.domain + "/" + knn.label; }

KnnId resolve_seed(const Graph& graph, const std::string& name) {
    auto slash = name.find('/');
    if (slash == std::string::npos) {
        throw Error(Errc::UnknownKnn,
                    "seed must be written domain/label, got '" + name + "'");
    }
    const Knn* knn =
        graph.find_knn(name.substr(0, slash), name.substr(slash + 1));
    if (!knn) throw Error(Errc::UnknownKnn, "no knn named '" + name + "'");
    return knn->id;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        auto comma = text.find(',', start);
        if (comma == std::string::npos) {
            parts.push_back(text.substr(start));
            return parts;
        }
        parts.push_back(text.substr(start, comma - start));
        start = comma + 1;
    }
}

std::string join_lengths(const std::vector<std::size_t>& lengths) {
    std::string out;
    for (std::size_t n : lengths) {
        if (!out.empty()) out += ',';
        out += std::to_string(n);
    }
    return out.empty() ? "-" : out;
}

int cmd_embed(const fs::path& db, const std::vector<std::string>& files,
              std::ostream& out, std::ostream& err) {
    Graph graph = fs::exists(db) ? load_snapshot(db) : Graph{};

    struct ParsedFile {
        std::string name;
        std::vector<EmbedStatement> statements;
    };
    std::vector<ParsedFile> parsed;
    bool parse_failed = false;
    for (const auto& file : files) {
        std::ifstream in(file, std::ios::binary);
        if (!in) {
            err << "ils: cannot read '" << file << "'\n";
            return kDomainError;
        }
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        auto result = parse_statements(text);
        for (const auto& d : result.errors) {
            err << file << ":" << d.line << ": " << d.message << "\n";
        }
        if (!result.ok()) parse_failed = true;
        parsed.push_back({file, std::move(result.statements)});
    }
    if (parse_failed) return kDomainError;

    EmbedReport total;
    for (const auto& file : parsed) {
        EmbedReport report = embed(graph, file.statements);
        total.knns_created += report.knns_created;
        total.knns_reused += report.knns_reused;
        total.links_created += report.links_created;
        total.statements += report.statements;
        for (const auto& d : report.errors) {
            err << file.name << ":" << d.line << ": " << d.message << "\n";
            total.errors.push_back(d);
        }
    }
    out << "knns_created=" << total.knns_created
        << " links_created=" << total.links_created
        << " knns_reused=" << total.knns_reused
        << " statements=" << total.statements
        << " errors=" << total.errors.size() << "\n";
    save_snapshot_atomic(graph, db);
    return total.ok() ? kOk : kDomainError;
}

int cmd_threads(const fs::path& db, const std::string& seed_name,
                const RetrievalOptions& options, std::ostream& out) {
    Graph graph = load_required(db);
    KnnId seed = resolve_seed(graph, seed_name);
    std::string seed_label = qualified(graph.knn(seed));
    for (const auto& thread : retrieve_threads(graph, seed, options)) {
        out << seed_label;
        for (const auto& link : thread.links()) {
            out << " -> " << qualified(graph.knn(link.properties.destination));
        }
        out << "  [strength=" << thread_strength(thread) << "]\n";
    }
    return kOk;
}

int cmd_stats(const fs::path& db, const std::string& seed_list,
              const RetrievalOptions& options, std::ostream& out) {
    Graph graph = load_required(db);
    std::vector<KnnId> seeds;
    if (seed_list.empty()) {
        for (const auto& [id, knn] : graph.knns()) seeds.push_back(id);
    } else {
        for (const auto& name : split_list(seed_list)) {
            seeds.push_back(resolve_seed(graph, name));
        }
    }
    auto rows = stats_table(graph, seeds, options);

    std::vector<std::array<std::string, 4>> cells;
    cells.push_back({"seed", "threads", "cone", "lengths"});
    for (const auto& row : rows) {
        cells.push_back({qualified(graph.knn(row.seed)),
                         std::to_string(row.thread_count),
                         std::to_string(row.cone_level),
                         join_lengths(row.lengths)});
    }
    std::array<std::size_t, 4> widths{};
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            widths[c] = std::max(widths[c], row[c].size());
        }
    }
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << row[c];
            if (c + 1 < row.size()) {
                out << std::string(widths[c] - row[c].size() + 2, ' ');
            }
        }
        out << "\n";
    }
    return kOk;
}

int cmd_export(const fs::path& db, bool include_unnatural, std::ostream& out) {
    Graph graph = load_required(db);
    if (include_unnatural) {
        // Visualize what retrieval would admit; nothing is persisted.
        for (const auto& proposal : infer_unnatural_links(graph)) {
            if (validate_link(graph, proposal).accepted) {
                graph.materialize(proposal);
            }
        }
    }
    out << export_dot(graph, {include_unnatural});
    return kOk;
}

int cmd_audit(const fs::path& db, std::ostream& out) {
    Graph graph = load_required(db);
    auto violations = graph.audit();
    if (violations.empty()) {
        out << "audit: ok (" << graph.knn_count() << " knns, "
            << graph.link_count() << " links)\n";
        return kOk;
    }
    for (const auto& v : violations) out << "violation: " << v << "\n";
    return kDomainError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
    CLI::App app{"Informledge knowledge-network engine", "ils"};
    std::string db_path = "./kb.ils";
    app.add_option("--db", db_path, "snapshot file path")
        ->envname("ILS_DB")
        ->capture_default_str();
    app.require_subcommand(1);

    auto* embed_cmd =
        app.add_subcommand("embed", "embed DSL files into the snapshot");
    std::vector<std::string> files;
    embed_cmd->add_option("files", files, "DSL files to embed")
        ->required()
        ->expected(-1);

    RetrievalOptions options;
    bool all_prefixes = false;

    auto* threads_cmd =
        app.add_subcommand("threads", "retrieve knowledge threads from a seed");
    std::string seed_name;
    threads_cmd->add_option("--seed", seed_name, "seed knn as domain/label")
        ->required();
    threads_cmd->add_option("--max-depth", options.max_depth,
                            "maximum links per thread")
        ->check(CLI::PositiveNumber);
    threads_cmd->add_flag("--include-unnatural", options.include_unnatural,
                          "admit validated inferred links");
    threads_cmd->add_flag("--all-prefixes", all_prefixes,
                          "emit every prefix, not only maximal threads");

    auto* stats_cmd =
        app.add_subcommand("stats", "thread statistics per seed");
    std::string seed_list;
    stats_cmd->add_option("--seeds", seed_list,
                          "comma-separated seeds (default: every knn)");
    stats_cmd->add_option("--max-depth", options.max_depth,
                          "maximum links per thread")
        ->check(CLI::PositiveNumber);
    stats_cmd->add_flag("--include-unnatural", options.include_unnatural,
                        "admit validated inferred links");
    stats_cmd->add_flag("--all-prefixes", all_prefixes,
                        "emit every prefix, not only maximal threads");

    auto* export_cmd =
        app.add_subcommand("export", "write the graph as DOT to stdout");
    bool export_unnatural = false;
    export_cmd->add_flag("--include-unnatural", export_unnatural,
                         "include validated inferred links, dashed");

    auto* audit_cmd =
        app.add_subcommand("audit", "run the consistency audit");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsageError;
    }
    options.maximal_only = !all_prefixes;

    try {
        fs::path db(db_path);
        if (app.got_subcommand(embed_cmd)) return cmd_embed(db, files, out, err);
        if (app.got_subcommand(threads_cmd)) {
            return cmd_threads(db, seed_name, options, out);
        }
        if (app.got_subcommand(stats_cmd)) {
            return cmd_stats(db, seed_list, options, out);
        }
        if (app.got_subcommand(export_cmd)) {
            return cmd_export(db, export_unnatural, out);
        }
        if (app.got_subcommand(audit_cmd)) return cmd_audit(db, out);
    } catch (const Error& e) {
        err << "ils: " << e.what() << "\n";
        return kDomainError;
    } catch (const std::exception& e) {
        err << "ils: " << e.what() << "\n";
        return kDomainError;
    }
    return kUsageError;
}

}  // namespace ils::cli
