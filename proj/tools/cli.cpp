#include "cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <map>
#include <sstream>

#include "cacluster/cacluster.hpp"

namespace fs = std::filesystem;

namespace cacluster::cli {
namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<Rule> parse_rule_list(const std::vector<std::string>& items) {
    std::vector<Rule> rules;
    for (const auto& item : items)
        for (auto f : detail::split_fields(item, ',')) {
            auto s = detail::trim(f);
            if (s.empty()) continue;
            try {
                rules.push_back(Rule::from_decimal(detail::parse_number<std::uint32_t>(s, "rule")));
            } catch (const ParseError& e) {
                throw UsageError(e.message());
            }
        }
    return rules;
}

struct DataOptions {
    std::string input;
    std::string schema;
    std::string plan;
    unsigned split_size = 0;
    unsigned clusters = 0;
    unsigned max_cell_length = kDefaultMaxCellLength;
    unsigned max_cells = kDefaultMaxCells;
    unsigned threads = 1;
    bool standardize = false;
    std::string out_dir = ".";
    std::string labels_out, scores_out, trace_out;
};

void add_data_options(CLI::App* cmd, DataOptions& o) {
    cmd->add_option("--input", o.input, "CSV file with a header row")->required()->check(CLI::ExistingFile);
    cmd->add_option("--schema", o.schema, "sidecar schema (name,kind per line)")->check(CLI::ExistingFile);
    cmd->add_option("--plan", o.plan, "encoding plan to use instead of fitting one")->check(CLI::ExistingFile);
    cmd->add_option("--split-size", o.split_size, "cells per vertical split (n1)")
        ->required()
        ->check(CLI::Range(1u, kHardMaxCells));
    cmd->add_option("--clusters", o.clusters, "number of clusters")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--max-cell-length", o.max_cell_length, "widest merged object before recursing")
        ->capture_default_str()
        ->check(CLI::Range(1u, kHardMaxCells));
    cmd->add_option("--max-cells", o.max_cells, "largest cell count the CA engine will enumerate")
        ->capture_default_str()
        ->check(CLI::Range(1u, kHardMaxCells));
    cmd->add_option("--threads", o.threads, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_flag("--standardize", o.standardize, "z-score features before scoring");
    cmd->add_option("--out-dir", o.out_dir, "directory for default output files")->capture_default_str();
    cmd->add_option("--labels-out", o.labels_out, "label CSV (default <out-dir>/labels.csv)");
    cmd->add_option("--scores-out", o.scores_out, "score report (default <out-dir>/scores.txt)");
    cmd->add_option("--trace-out", o.trace_out, "stage trace (default <out-dir>/trace.txt)");
}

struct Dataset {
    std::string bytes;
    Table table;
    EncodingPlan plan;
    EncodedDataset encoded;
    FeatureMatrix features;
};

template <typename Fn>
auto in_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (Error& e) {
        if (e.stage().empty()) e.set_stage(stage);
        throw;
    }
}

Dataset load_dataset(const DataOptions& o) {
    Dataset d;
    in_stage("input", [&] {
        d.bytes = read_file(o.input);
        d.table = read_csv_text(d.bytes);
    });
    in_stage("encoding", [&] {
        if (!o.plan.empty()) {
            d.plan = EncodingPlan::parse(read_file(o.plan));
        } else {
            Schema schema = o.schema.empty() ? infer_schema(d.table) : parse_schema(read_file(o.schema));
            d.plan = fit_plan(d.table, schema);
        }
        d.encoded = encode_dataset(d.plan, d.table);
        d.features = feature_matrix(d.table, d.plan, o.standardize);
    });
    return d;
}

fs::path output_path(const DataOptions& o, const std::string& explicit_path, const char* name) {
    return explicit_path.empty() ? fs::path(o.out_dir) / name : fs::path(explicit_path);
}

void ensure_parent(const fs::path& p) {
    if (p.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(p.parent_path(), ec);
        if (ec) throw IoError("cannot create directory '" + p.parent_path().string() + "': " + ec.message());
    }
}

struct RunArtifacts {
    ClusteringResult result;
    ScoreReport scores;
};

RunArtifacts run_once(const Dataset& d, const DataOptions& o, const std::vector<Rule>& rules) {
    ClusterParams p;
    p.rules = rules;
    p.split_size = o.split_size;
    p.clusters = o.clusters;
    p.max_cell_length = o.max_cell_length;
    p.threads = o.threads;
    p.limits.max_cells = o.max_cells;
    RunArtifacts a{cluster(d.encoded, p), {}};
    a.scores = in_stage("scoring", [&] { return score(d.features, a.result.labels, o.threads); });
    return a;
}

// All outputs are rendered first and then renamed into place one by one.
void write_run(const DataOptions& o, const Dataset& d, const RunArtifacts& a) {
    in_stage("output", [&] {
        std::ostringstream labels, scores, trace;
        labels << "row,cluster\n";
        for (std::size_t j = 0; j < a.result.labels.size(); ++j)
            labels << d.encoded.row_ids[j] + 1 << ',' << a.result.labels[j] << '\n';
        a.scores.write(scores);
        a.result.write_trace(trace);
        std::vector<std::pair<fs::path, std::string>> files = {
            {output_path(o, o.labels_out, "labels.csv"), labels.str()},
            {output_path(o, o.scores_out, "scores.txt"), scores.str()},
            {output_path(o, o.trace_out, "trace.txt"), trace.str()},
        };
        for (const auto& [path, text] : files) ensure_parent(path);
        for (const auto& [path, text] : files) write_file_atomic(path, text);
    });
}

void print_summary(std::ostream& out, const std::vector<Rule>& rules, const RunArtifacts& a) {
    out << "rules=" << SavedState::join_rules(rules) << "\n";
    a.scores.write(out);
}

int cmd_cluster(const DataOptions& o, const std::vector<std::string>& rule_items, std::ostream& out,
                std::ostream& err) {
    auto rules = parse_rule_list(rule_items);
    if (rules.empty()) throw UsageError("--rules needs at least one rule");
    auto d = load_dataset(o);
    auto a = run_once(d, o, rules);
    for (const auto& w : a.result.warnings) err << "warning: " << w << "\n";
    write_run(o, d, a);
    print_summary(out, rules, a);
    return 0;
}

struct SearchOptions {
    std::string state_dir;
    std::vector<std::string> rules;
    unsigned tuple_length = 2;
    std::size_t budget = 0;
    std::string leaderboard_out;
    bool ignore_state = false;
};

int cmd_search(const DataOptions& o, const SearchOptions& so, std::ostream& out, std::ostream& err) {
    auto d = load_dataset(o);
    StateStore store(so.state_dir.empty() ? StateStore::default_dir() : fs::path(so.state_dir));
    const auto fp = dataset_fingerprint(d.bytes, d.plan.to_text(), o.split_size, o.clusters);

    if (!so.ignore_state) {
        auto saved = in_stage("state", [&] { return store.load(fp); });
        if (saved) {
            err << "replaying stored rules for fingerprint " << fp << "\n";
            auto a = run_once(d, o, saved->rules);
            write_run(o, d, a);
            out << "source=state\n";
            print_summary(out, saved->rules, a);
            return 0;
        }
    }

    auto tuples = in_stage("search", [&] {
        auto custom = parse_rule_list(so.rules);
        std::vector<Rule> candidates = custom.empty() ? candidate_rules(o.split_size) : custom;
        return enumerate_tuples(candidates, so.tuple_length, so.budget);
    });
    if (tuples.empty()) throw InvalidArgument("no rule tuples to evaluate");

    SearchParams sp{o.split_size, o.clusters, o.max_cell_length, o.threads, EngineLimits{o.max_cells}};
    auto ranked = rank_entries(evaluate_tuples(d.encoded.objects, d.features, tuples, sp));

    std::ostringstream board;
    write_leaderboard(board, ranked);
    const fs::path board_path =
        so.leaderboard_out.empty() ? fs::path(o.out_dir) / "leaderboard.tsv" : fs::path(so.leaderboard_out);
    in_stage("output", [&] {
        ensure_parent(board_path);
        write_file_atomic(board_path, board.str());
    });

    if (ranked.empty() || !ranked.front().ok) {
        Error e("none of the " + std::to_string(tuples.size()) + " rule tuples produced a valid clustering");
        e.set_stage("search");
        throw e;
    }
    const auto& best = ranked.front();
    auto a = run_once(d, o, best.rules);
    write_run(o, d, a);

    SavedState s;
    s.fingerprint = fp;
    s.rules = best.rules;
    s.split_size = o.split_size;
    s.clusters = o.clusters;
    s.silhouette = best.scores.silhouette;
    s.davies_bouldin = best.scores.davies_bouldin;
    s.calinski_harabasz = best.scores.calinski_harabasz;
    s.created = utc_timestamp();
    s.tool_version = std::string(kToolVersion);
    in_stage("state", [&] { store.save(s); });

    out << "source=search\n";
    out << "evaluated=" << tuples.size() << "\n";
    print_summary(out, best.rules, a);
    return 0;
}

struct AnalyzeOptions {
    unsigned n = 0;
    std::vector<std::string> rules;
    bool catalog = false;
    unsigned max_cells = kDefaultMaxCells;
    unsigned threads = 1;
    std::optional<double> l1;
    std::optional<std::size_t> l2;
};

std::string analyze_rule(Rule rule, const AnalyzeOptions& o, const CatalogEntry* entry) {
    std::ostringstream os;
    EngineLimits limits{o.max_cells};
    auto prof = profile(rule);
    os << "rule=" << rule.decimal() << "\n";
    os << "table=" << rule.to_table_string() << "\n";
    for (unsigned k = 0; k < 5; ++k)
        os << "lambda" << k << "=" << prof.lambda[k].to_string() << "\n";
    os << "self_replication=" << prof.self_replication.to_string() << "\n";
    os << "criterion1=" << (prof.criterion1 ? "pass" : "fail") << "\n";
    bool reversible = is_reversible(rule, o.n, limits);
    os << "reversible=" << (reversible ? "true" : "false") << "\n";
    if (reversible) {
        auto report = signature_report(rule, o.n, limits);
        os << "cycles=" << report.cycle_count() << "\n";
        os << "signature_histogram=";
        bool first = true;
        for (auto [sig, count] : report.histogram()) {
            os << (first ? "" : ",") << sig << ":" << count;
            first = false;
        }
        os << "\n";
        os << "fraction_le_9=" << detail::format_double(report.fraction_le_9()) << "\n";
        os << "fraction_le_99=" << detail::format_double(report.fraction_le_99()) << "\n";
        auto l1 = o.l1 ? o.l1 : (entry ? std::optional<double>(entry->l1) : std::nullopt);
        auto l2 = o.l2 ? o.l2 : (entry ? std::optional<std::size_t>(entry->l2) : std::nullopt);
        if (l1) os << "criterion2=" << (passes_criterion2(report, *l1) ? "pass" : "fail") << "\n";
        if (l2) os << "criterion3=" << (passes_criterion3(report, Criterion3Params{l2.value()}) ? "pass" : "fail") << "\n";
        if (entry && entry->small_n_criterion3 && !o.l2)
            os << "criterion3_small_n="
               << (passes_criterion3(report, *entry->small_n_criterion3) ? "pass" : "fail") << "\n";
    }
    return os.str();
}

int cmd_analyze(const AnalyzeOptions& o, std::ostream& out) {
    auto rules = parse_rule_list(o.rules);
    const RuleCatalog& cat = RuleCatalog::builtin();
    const CatalogEntry* entry = cat.contains(o.n) ? &cat.entry(o.n) : nullptr;
    if (o.catalog) {
        if (!entry) throw CatalogRangeError("no catalog entry for n=" + std::to_string(o.n));
        rules.insert(rules.end(), entry->candidates.begin(), entry->candidates.end());
    }
    if (rules.empty()) throw UsageError("give --rule or --catalog");
    if (o.n == 0 || o.n > std::min(o.max_cells, kHardMaxCells))
        throw CapacityError("n=" + std::to_string(o.n) + " exceeds the engine limit of " +
                            std::to_string(std::min(o.max_cells, kHardMaxCells)));

    std::vector<std::string> blocks(rules.size());
    in_stage("analyze", [&] {
        parallel_for(rules.size(), o.threads, [&](std::size_t i) { blocks[i] = analyze_rule(rules[i], o, entry); });
    });
    out << "format=cacluster-analysis/1\n";
    out << "n=" << o.n << "\n";
    if (o.l1 || entry) out << "l1=" << detail::format_double(o.l1 ? *o.l1 : entry->l1) << "\n";
    if (o.l2 || entry) out << "l2=" << (o.l2 ? *o.l2 : entry->l2) << "\n";
    for (const auto& b : blocks) out << "\n" << b;
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Clusters tabular data on the cycles of reversible cellular automata."};
    app.name("cacluster");
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    DataOptions cluster_opts;
    std::vector<std::string> cluster_rules;
    auto* cluster_cmd = app.add_subcommand("cluster", "cluster a dataset with a fixed rule list");
    add_data_options(cluster_cmd, cluster_opts);
    cluster_cmd->add_option("--rules", cluster_rules, "comma-separated rule decimals: R1[,R2[,R3...]]")
        ->required()
        ->delimiter(',');

    DataOptions search_opts;
    SearchOptions search;
    auto* search_cmd = app.add_subcommand("search", "search rule tuples and keep the best per dataset");
    add_data_options(search_cmd, search_opts);
    search_cmd->add_option("--rules", search.rules, "custom candidate rules (default: catalog for the split size)")
        ->delimiter(',');
    search_cmd->add_option("--state-dir", search.state_dir,
                           "saved-state directory (default $" + std::string(kStateDirEnv) + " or .cacluster-state)");
    search_cmd->add_option("--tuple-length", search.tuple_length, "rules per tuple")
        ->capture_default_str()
        ->check(CLI::Range(1u, 8u));
    search_cmd->add_option("--budget", search.budget, "evaluate at most this many tuples (0 = all)")
        ->capture_default_str();
    search_cmd->add_option("--leaderboard-out", search.leaderboard_out,
                           "leaderboard TSV (default <out-dir>/leaderboard.tsv)");
    search_cmd->add_flag("--ignore-state", search.ignore_state, "search even if a saved state exists");

    AnalyzeOptions analyze;
    auto* analyze_cmd = app.add_subcommand("analyze", "report rule properties and selection criteria");
    analyze_cmd->add_option("--n", analyze.n, "cell count")->required()->check(CLI::Range(1u, kHardMaxCells));
    analyze_cmd->add_option("--rule", analyze.rules, "rule decimal(s)")->delimiter(',');
    analyze_cmd->add_flag("--catalog", analyze.catalog, "analyze every catalogued rule for n");
    analyze_cmd->add_option("--max-cells", analyze.max_cells, "largest cell count the CA engine will enumerate")
        ->capture_default_str()
        ->check(CLI::Range(1u, kHardMaxCells));
    analyze_cmd->add_option("--threads", analyze.threads, "worker threads")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    analyze_cmd->add_option("--l1", analyze.l1, "Criterion 2 fraction (default: catalog value)")
        ->check(CLI::Range(0.0, 1.0));
    analyze_cmd->add_option("--l2", analyze.l2, "Criterion 3 cycle cap (default: catalog value)");

    std::vector<std::string> argv_store;
    argv_store.push_back("cacluster");
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_store) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*cluster_cmd) return cmd_cluster(cluster_opts, cluster_rules, out, err);
        if (*search_cmd) return cmd_search(search_opts, search, out, err);
        if (*analyze_cmd) return cmd_analyze(analyze, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

} // namespace cacluster::cli
