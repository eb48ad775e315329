#include "cli.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif
#include <nlohmann/json.hpp>

#include "lexis/lexis.hpp"

namespace lexis::cli {
namespace {

using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct run_config {
    std::string command;
    std::vector<std::string> inputs;
    std::string mode = "char";
    std::string objective = "edge";
    double tau = 0.05;
    double coverage = 0.95;
    bool tau_given = false;
    bool coverage_given = false;
    double alpha = 0.1;
    std::size_t trials = 500;
    std::uint64_t seed = 1;
    std::size_t top = 0;
    std::string baseline = "none";
    std::string method;
    std::string orders = "2,3";
    bool exact_pairs = false;
    std::size_t jobs = 1;
    std::string out_dir;

    // generate
    std::string kind = "planted";
    planted_hierarchy_spec planted;
    planted_motif_spec motif;
    std::size_t uniform_alphabet = 4;
    std::size_t uniform_targets = 10;
    std::size_t uniform_length = 100;

    split_mode split() const { return mode == "token" ? split_mode::tokens : split_mode::chars; }

    // Remaining-path fraction for G-Core: --tau directly, or 1 - --coverage.
    double remaining_fraction() const {
        if (tau_given) {
            return tau;
        }
        // Rounded so that e.g. coverage 0.95 gives exactly 0.05.
        return std::round((1.0 - coverage) * 1e12) / 1e12;
    }
};

// ---------------------------------------------------------------- formatting

std::string fixed(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

std::string csv_field(const std::string& s) {
    const bool quote = s.find_first_of(",\"\n\r") != std::string::npos || (!s.empty() && (s.front() == ' ' || s.back() == ' '));
    if (!quote) {
        return s;
    }
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') {
            out += '"';
        }
        out += ch;
    }
    return out + "\"";
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(std::uint64_t x) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
    return buf;
}

// ------------------------------------------------------------------- input

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw error(error_kind::io_error, "cannot read '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
        throw error(error_kind::io_error, "error while reading '" + path + "'");
    }
    return buf.str();
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string::npos) {
            end = text.size();
        }
        lines.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return lines;
}

corpus load_corpus(const std::string& path, split_mode mode) { return ingest_lines(split_lines(read_file(path)), mode); }

bool is_json_path(const std::string& path) { return fs::path(path).extension() == ".json"; }

builder builder_of(const run_config& cfg) {
    return cfg.baseline == "longest-repeat" ? builder::longest_repeat : builder::glexis;
}

// A DAG file (.json) is loaded as is; anything else is a corpus to build.
lexis_dag load_dag(const run_config& cfg, const std::string& path) {
    if (is_json_path(path)) {
        return from_json(read_file(path));
    }
    return build(load_corpus(path, cfg.split()), {.strategy = builder_of(cfg)}).dag;
}

std::string dataset_name(const std::string& path) { return fs::path(path).stem().string(); }

std::vector<std::size_t> parse_orders(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const auto n = std::stoul(item, &used);
            if (used != item.size() || n == 0) {
                throw std::invalid_argument(item);
            }
            out.push_back(n);
        } catch (const std::exception&) {
            throw usage_error("--orders expects comma-separated positive integers, got '" + text + "'");
        }
    }
    if (out.empty()) {
        throw usage_error("--orders must list at least one order");
    }
    return out;
}

// ------------------------------------------------------------------ output

class run_output {
public:
    run_output(const run_config& cfg, std::string default_dir) : cfg_(cfg) {
        dir_ = cfg.out_dir.empty() ? fs::path(default_dir) : fs::path(cfg.out_dir);
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) {
            throw error(error_kind::io_error, "cannot create '" + dir_.string() + "': " + ec.message());
        }
    }

    void write(const std::string& name, const std::string& content) {
        const auto path = dir_ / name;
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw error(error_kind::io_error, "cannot write '" + path.string() + "'");
        }
        f << content;
        if (!f) {
            throw error(error_kind::io_error, "error while writing '" + path.string() + "'");
        }
        files_.push_back(name);
    }

    // Written last. Records everything that determines the outputs; nothing
    // time- or machine-dependent.
    void write_manifest(const ordered_json& config) {
        ordered_json m;
        m["tool"] = "lexis";
        m["command"] = cfg_.command;
        auto inputs = ordered_json::array();
        for (const auto& p : cfg_.inputs) {
            const auto bytes = read_file(p);
            inputs.push_back({{"path", p}, {"bytes", bytes.size()}, {"fnv1a64", hex64(fnv1a(bytes))}});
        }
        m["inputs"] = std::move(inputs);
        m["config"] = config;
        m["outputs"] = files_;
        write("manifest.json", dump(m));
    }

    const fs::path& dir() const { return dir_; }

private:
    const run_config& cfg_;
    fs::path dir_;
    std::vector<std::string> files_;
};

ordered_json stats_json(const dag_stats& s) {
    return {{"edge_cost", s.edge_cost}, {"concat_cost", s.concat_cost}, {"intermediates", s.intermediates},
            {"depth", s.depth}};
}

// ---------------------------------------------------------------- commands

int cmd_build(const run_config& cfg, std::ostream& out) {
    const auto c = load_corpus(cfg.inputs.at(0), cfg.split());
    const auto res = build(c, {.strategy = builder_of(cfg)});
    const auto& dag = res.dag;
    run_output o(cfg, "lexis-build");
    o.write("dag.json", to_json(dag));
    o.write("dag.dot", to_dot(dag));

    std::string trace = "step,node,label,members,count_overlapping,saved_cost,replaced,edge_cost,concat_cost\n";
    for (std::size_t i = 0; i < res.trace.steps.size(); ++i) {
        const auto& s = res.trace.steps[i];
        std::string members;
        for (std::size_t k = 0; k < s.members.size(); ++k) {
            members += (k ? "|" : "") + s.members[k];
        }
        trace += std::to_string(i + 1) + "," + std::to_string(s.node) + "," + csv_field(s.label) + "," +
                 csv_field(members) + "," + std::to_string(s.count_overlapping) + "," + std::to_string(s.saved_cost) +
                 "," + std::to_string(s.replaced) + "," + std::to_string(s.edge_cost) + "," +
                 std::to_string(s.concat_cost) + "\n";
    }
    o.write("trace.csv", trace);

    const auto e = edge_cost(dag);
    const auto cc = concat_cost(dag);
    ordered_json summary;
    summary["builder"] = builder_of(cfg) == builder::glexis ? "g-lexis" : "longest-repeat";
    summary["objective"] = cfg.objective;
    summary["objective_value"] = cfg.objective == "edge" ? e : cc;
    summary["edge_cost"] = e;
    summary["concat_cost"] = cc;
    summary["intermediates"] = dag.intermediates().size();
    summary["depth"] = dag_depth(dag);
    summary["targets"] = c.targets.size();
    summary["total_length"] = c.total_length();
    summary["iterations"] = res.trace.steps.size();
    o.write("summary.json", dump(summary));
    o.write_manifest({{"mode", cfg.mode}, {"objective", cfg.objective}, {"baseline", cfg.baseline}});

    out << "edge_cost=" << e << " concat_cost=" << cc << " intermediates=" << dag.intermediates().size()
        << " depth=" << dag_depth(dag) << "\n";
    return exit_ok;
}

int cmd_analyze(const run_config& cfg, std::ostream& out) {
    const auto dag = load_dag(cfg, cfg.inputs.at(0));
    const auto rep = path_centrality(dag);
    const auto rows = cfg.top == 0 ? rep.ranking.size() : std::min(cfg.top, rep.ranking.size());
    run_output o(cfg, "lexis-analyze");

    std::string csv = "rank,node,label,length,P_S,P_T,P\n";
    auto nodes = ordered_json::array();
    for (std::size_t i = 0; i < rows; ++i) {
        const auto& e = rep.ranking[i];
        csv += std::to_string(i + 1) + "," + std::to_string(e.node) + "," + csv_field(e.label) + "," +
               std::to_string(e.length) + "," + std::to_string(e.from_sources) + "," + std::to_string(e.to_targets) +
               "," + std::to_string(e.centrality) + "\n";
        nodes.push_back({{"rank", i + 1}, {"node", e.node}, {"label", e.label}, {"length", e.length},
                         {"P_S", e.from_sources}, {"P_T", e.to_targets}, {"P", e.centrality}});
    }
    o.write("centrality.csv", csv);
    o.write("centrality.json", dump({{"total_paths", rep.total_paths}, {"nodes", std::move(nodes)}}));
    o.write_manifest({{"mode", cfg.mode}, {"baseline", cfg.baseline}, {"top", cfg.top}});

    out << "intermediates=" << rep.ranking.size() << " total_paths=" << rep.total_paths << "\n";
    for (std::size_t i = 0; i < rows && i < 15; ++i) {
        out << (i + 1) << ". " << rep.ranking[i].label << " P=" << rep.ranking[i].centrality << "\n";
    }
    return exit_ok;
}

ordered_json core_json(const lexis_dag& dag, const core_result& r, bool feasible) {
    auto core = ordered_json::array();
    for (auto v : r.core) {
        core.push_back({{"node", v}, {"label", dag.label(v)}, {"length", dag.string(v).size()}});
    }
    return {{"tau", r.tau},
            {"feasible", feasible},
            {"paths_total", r.paths_total},
            {"paths_remaining", r.paths_remaining},
            {"core", std::move(core)},
            {"remaining_history", r.remaining_history}};
}

int cmd_core(const run_config& cfg, std::ostream& out, std::ostream& err) {
    const auto dag = load_dag(cfg, cfg.inputs.at(0));
    const auto tau = cfg.remaining_fraction();
    run_output o(cfg, "lexis-core");
    const ordered_json config{{"mode", cfg.mode}, {"baseline", cfg.baseline}, {"tau", tau}};
    try {
        const auto r = g_core(dag, tau);
        o.write("core.json", dump(core_json(dag, r, true)));
        o.write_manifest(config);
        out << "core=[";
        for (std::size_t i = 0; i < r.core.size(); ++i) {
            out << (i ? ", " : "") << dag.label(r.core[i]);
        }
        out << "] remaining=" << r.paths_remaining << "/" << r.paths_total << "\n";
        return exit_ok;
    } catch (const core_infeasible& e) {
        o.write("core.json", dump(core_json(dag, e.partial(), false)));
        o.write_manifest(config);
        err << "core: " << e.what() << "\n";
        return exit_data;
    }
}

int cmd_compress(const run_config& cfg, std::ostream& out) {
    const auto method = cfg.method.empty() ? std::string("all") : cfg.method;
    const auto c = load_corpus(cfg.inputs.at(0), cfg.split());
    const auto name = dataset_name(cfg.inputs.at(0));
    const auto orders = parse_orders(cfg.orders);

    struct row {
        std::string label;
        compression_result result;
    };
    std::vector<row> rows;
    std::optional<lexis_dag> dag;
    auto glexis_dag = [&]() -> const lexis_dag& {
        if (!dag) {
            dag = build(c, {.strategy = builder_of(cfg)}).dag;
        }
        return *dag;
    };
    if (method == "dag" || method == "all") {
        rows.push_back({"dag", compress_via_dag(glexis_dag())});
    }
    if (method == "lr" || method == "all") {
        rows.push_back({"lr-ngrams", compress_lr(c, ngram_candidates(c, orders))});
    }
    if (method == "lr-lexis" || method == "all") {
        rows.push_back({"lr-lexis", compress_lr(c, lexis_node_candidates(glexis_dag()))});
    }
    for (const auto& r : rows) {
        if (decompress(r.result) != c.targets) {
            throw std::logic_error("decompression mismatch for method " + r.label);
        }
    }

    run_output o(cfg, "lexis-compress");
    std::string csv = "dataset,method,original_size,compressed_size,ratio_percent,dictionary_entries\n";
    auto arr = ordered_json::array();
    for (const auto& r : rows) {
        csv += csv_field(name) + "," + r.label + "," + std::to_string(r.result.original_size) + "," +
               std::to_string(r.result.compressed_size) + "," + fixed(r.result.ratio, 2) + "," +
               std::to_string(r.result.dictionary.size()) + "\n";
        auto dict = ordered_json::array();
        for (const auto& d : r.result.dictionary_strings) {
            dict.push_back(render(c, d));
        }
        arr.push_back({{"method", r.label},
                       {"original_size", r.result.original_size},
                       {"compressed_size", r.result.compressed_size},
                       {"ratio_percent", r.result.ratio},
                       {"dictionary", std::move(dict)}});
        out << r.label << " " << r.result.compressed_size << "/" << r.result.original_size << " = "
            << fixed(r.result.ratio, 1) << "%\n";
    }
    o.write("compression.csv", csv);
    o.write("compression.json", dump({{"dataset", name}, {"results", std::move(arr)}}));
    o.write_manifest({{"mode", cfg.mode}, {"method", method}, {"orders", orders}, {"baseline", cfg.baseline}});
    return exit_ok;
}

int cmd_features(const run_config& cfg, std::ostream& out, std::ostream& err) {
    const auto method = cfg.method.empty() ? std::string("core") : cfg.method;
    std::vector<labelled_corpus> classes;
    std::set<std::string> names;
    for (const auto& p : cfg.inputs) {
        auto name = dataset_name(p);
        if (!names.insert(name).second) {
            throw usage_error("two class files share the name '" + name + "'");
        }
        classes.push_back({name, load_corpus(p, cfg.split())});
    }
    const auto tau = cfg.remaining_fraction();

    feature_set fs;
    std::vector<std::size_t> orders;
    if (method == "core") {
        fs = extract_core_features(classes, tau, cfg.jobs);
    } else {
        orders = parse_orders(cfg.orders);
        std::vector<feature_set> parts;
        for (const auto& cls : classes) {
            parts.push_back(ngram_features(cls.docs, std::set<std::size_t>(orders.begin(), orders.end()), cls.name));
        }
        fs = unite(parts);
    }
    for (const auto& w : fs.warnings) {
        err << "warning: " << w << "\n";
    }

    // One document per target across all classes, in class order, over a
    // shared alphabet.
    std::vector<std::string> lines;
    std::string labels;
    std::size_t doc = 0;
    for (const auto& cls : classes) {
        for (auto& line : render_lines(cls.docs)) {
            lines.push_back(std::move(line));
            labels += std::to_string(++doc) + " " + cls.name + "\n";
        }
    }
    const auto docs = ingest_lines(lines, cfg.split());
    const auto m = count_matrix(fs, docs);

    run_output o(cfg, "lexis-features");
    o.write("matrix.txt", to_triplets(m));
    o.write("labels.txt", labels);
    auto feats = ordered_json::array();
    for (std::size_t i = 0; i < fs.features.size(); ++i) {
        feats.push_back({{"column", i + 1}, {"string", fs.features[i].text(cfg.split())}, {"classes", fs.features[i].classes}});
    }
    ordered_json j{{"method", method}};
    if (method == "core") {
        j["tau"] = tau;
    } else {
        j["orders"] = orders;
    }
    j["documents"] = m.rows;
    j["nonzeros"] = m.entries.size();
    j["warnings"] = fs.warnings;
    j["features"] = std::move(feats);
    o.write("features.json", dump(j));
    ordered_json config{{"mode", cfg.mode}, {"method", method}};
    if (method == "core") {
        config["tau"] = tau;
    } else {
        config["orders"] = orders;
    }
    o.write_manifest(config);

    out << "documents=" << m.rows << " features=" << m.cols << " nonzeros=" << m.entries.size() << "\n";
    return exit_ok;
}

int cmd_randomize(const run_config& cfg, std::ostream& out) {
    const auto c = load_corpus(cfg.inputs.at(0), cfg.split());
    const auto event = cfg.exact_pairs ? null_event::exact : null_event::dominance;
    const auto run = randomize(c, cfg.trials, cfg.seed, cfg.jobs);
    const auto dag = build(c).dag;
    const auto table = significance_table(dag, run.null, cfg.alpha, event);

    run_output o(cfg, "lexis-randomize");
    const auto& rep = run.comparison;
    auto per_trial = ordered_json::array();
    for (const auto& s : rep.trials) {
        per_trial.push_back(stats_json(s));
    }
    o.write("comparison.json", dump({{"trials", cfg.trials},
                                     {"seed", cfg.seed},
                                     {"original", stats_json(rep.original)},
                                     {"randomized_mean", stats_json(rep.randomized_mean)},
                                     {"per_trial", std::move(per_trial)}}));

    std::string csv = "node,label,length,replacements,p_value,significant\n";
    std::string scatter = "length,replacements,significant\n";
    auto rows = ordered_json::array();
    std::size_t flagged = 0;
    for (const auto& r : table) {
        csv += std::to_string(r.node) + "," + csv_field(r.label) + "," + std::to_string(r.length) + "," +
               std::to_string(r.replacements) + "," + fixed(r.p, 6) + "," + (r.significant ? "1" : "0") + "\n";
        scatter += std::to_string(r.length) + "," + std::to_string(r.replacements) + "," + (r.significant ? "1" : "0") + "\n";
        rows.push_back({{"node", r.node}, {"label", r.label}, {"length", r.length}, {"replacements", r.replacements},
                        {"p_value", r.p}, {"significant", r.significant}});
        flagged += r.significant;
    }
    o.write("significance.csv", csv);
    o.write("significance.json", dump({{"alpha", cfg.alpha},
                                       {"event", cfg.exact_pairs ? "exact" : "dominance"},
                                       {"trials", cfg.trials},
                                       {"nodes", std::move(rows)}}));
    o.write("scatter_original.csv", scatter);

    std::map<length_replacements, std::size_t> null_pairs;
    for (const auto& pairs : run.null.occurred) {
        for (const auto& p : pairs) {
            ++null_pairs[p];
        }
    }
    std::string null_scatter = "length,replacements,trials\n";
    for (const auto& [p, n] : null_pairs) {
        null_scatter += std::to_string(p.length) + "," + std::to_string(p.replacements) + "," + std::to_string(n) + "\n";
    }
    o.write("scatter_randomized.csv", null_scatter);
    o.write_manifest({{"mode", cfg.mode},
                      {"trials", cfg.trials},
                      {"seed", cfg.seed},
                      {"alpha", cfg.alpha},
                      {"event", cfg.exact_pairs ? "exact" : "dominance"}});

    out << "original edge_cost=" << rep.original.edge_cost << " concat_cost=" << rep.original.concat_cost
        << " depth=" << rep.original.depth << "\n";
    out << "randomized mean edge_cost=" << fixed(rep.randomized_mean.edge_cost, 2)
        << " concat_cost=" << fixed(rep.randomized_mean.concat_cost, 2)
        << " depth=" << fixed(rep.randomized_mean.depth, 2) << "\n";
    out << "significant=" << flagged << "/" << table.size() << " at alpha=" << cfg.alpha << "\n";
    return exit_ok;
}

int cmd_generate(const run_config& cfg, std::ostream& out) {
    corpus c;
    ordered_json truth{{"kind", cfg.kind}};
    ordered_json config{{"kind", cfg.kind}, {"seed", cfg.seed}};
    if (cfg.kind == "planted") {
        auto spec = cfg.planted;
        spec.seed = cfg.seed;
        const auto p = gen_planted(spec);
        c = p.docs;
        auto levels = ordered_json::array();
        for (const auto& level : p.modules) {
            auto mods = ordered_json::array();
            for (const auto& m : level) {
                mods.push_back(render(c, m));
            }
            levels.push_back(std::move(mods));
        }
        truth["modules"] = std::move(levels);
        config["alphabet"] = spec.alphabet_size;
        config["depth"] = spec.depth;
        config["modules"] = spec.modules_per_level;
        config["module_length"] = spec.module_length;
        config["targets"] = spec.targets;
        config["length"] = spec.target_length;
        config["noise"] = spec.noise;
    } else if (cfg.kind == "motif") {
        auto spec = cfg.motif;
        spec.seed = cfg.seed;
        const auto m = gen_motif(spec);
        c = m.docs;
        truth["motif"] = render(c, m.motif);
        config["alphabet"] = spec.alphabet_size;
        config["motif_length"] = spec.motif_length;
        config["insertions"] = spec.insertions;
        config["total_length"] = spec.total_length;
        config["targets"] = spec.targets;
    } else {
        c = gen_uniform(cfg.uniform_alphabet, cfg.uniform_targets, cfg.uniform_length, cfg.seed);
        config["alphabet"] = cfg.uniform_alphabet;
        config["targets"] = cfg.uniform_targets;
        config["length"] = cfg.uniform_length;
    }
    std::string text;
    for (const auto& line : render_lines(c)) {
        text += line + "\n";
    }
    run_output o(cfg, "lexis-generate");
    o.write("corpus.txt", text);
    truth["mode"] = c.mode == split_mode::chars ? "char" : "token";
    truth["targets"] = c.targets.size();
    truth["total_length"] = c.total_length();
    o.write("ground_truth.json", dump(truth));
    o.write_manifest(config);
    out << "targets=" << c.targets.size() << " total_length=" << c.total_length() << " mode="
        << (c.mode == split_mode::chars ? "char" : "token") << "\n";
    return exit_ok;
}

// ------------------------------------------------------------ arg parsing

void add_common(CLI::App* sub, run_config& cfg, bool inputs_required = true) {
    sub->add_option("--mode", cfg.mode, "Split targets into characters or whitespace tokens")
        ->check(CLI::IsMember({"char", "token"}))
        ->capture_default_str();
    sub->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
    sub->add_option("--jobs", cfg.jobs, "Worker threads; results do not depend on it")
        ->check(CLI::Range(std::size_t{1}, std::size_t{1024}))
        ->capture_default_str();
    sub->add_option("--out", cfg.out_dir, "Output directory (created if missing)");
    if (inputs_required) {
        sub->add_option("inputs", cfg.inputs, "Input file(s)")->required()->check(CLI::ExistingFile);
    }
}

void add_baseline(CLI::App* sub, run_config& cfg) {
    sub->add_option("--baseline", cfg.baseline, "Builder used when the input is a corpus")
        ->check(CLI::IsMember({"none", "longest-repeat"}))
        ->capture_default_str();
}

void add_tau(CLI::App* sub, run_config& cfg) {
    auto* tau = sub->add_option("--tau", cfg.tau, "Fraction of source-to-target paths allowed to remain")
                    ->check(CLI::Range(0.0, 1.0));
    auto* cov = sub->add_option("--coverage", cfg.coverage, "Fraction of paths the core must cover (tau = 1 - coverage)")
                    ->check(CLI::Range(0.0, 1.0));
    tau->excludes(cov);
    sub->callback([&cfg, tau, cov] {
        cfg.tau_given = tau->count() > 0;
        cfg.coverage_given = cov->count() > 0;
    });
}

int dispatch(run_config& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.command == "build") {
        if (cfg.inputs.size() != 1) {
            throw usage_error("build takes exactly one corpus file");
        }
        return cmd_build(cfg, out);
    }
    if (cfg.command == "analyze") {
        if (cfg.inputs.size() != 1) {
            throw usage_error("analyze takes exactly one corpus or DAG file");
        }
        return cmd_analyze(cfg, out);
    }
    if (cfg.command == "core") {
        if (cfg.inputs.size() != 1) {
            throw usage_error("core takes exactly one corpus or DAG file");
        }
        return cmd_core(cfg, out, err);
    }
    if (cfg.command == "compress") {
        if (cfg.inputs.size() != 1) {
            throw usage_error("compress takes exactly one corpus file");
        }
        return cmd_compress(cfg, out);
    }
    if (cfg.command == "features") {
        return cmd_features(cfg, out, err);
    }
    if (cfg.command == "randomize") {
        if (cfg.inputs.size() != 1) {
            throw usage_error("randomize takes exactly one corpus file");
        }
        return cmd_randomize(cfg, out);
    }
    if (cfg.command == "generate") {
        return cmd_generate(cfg, out);
    }
    throw usage_error("unknown command");
}

int exit_for(error_kind k) {
    switch (k) {
    case error_kind::invalid_argument: return exit_usage;
    case error_kind::empty_corpus:
    case error_kind::empty_target:
    case error_kind::parse_error:
    case error_kind::validation_error:
    case error_kind::io_error:
    case error_kind::core_infeasible:
    case error_kind::invalid_candidate:
    case error_kind::invalid_spec:
    case error_kind::overflow: return exit_data;
    default: return exit_internal;
    }
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    run_config cfg;
    CLI::App app{"Lexis-DAG construction and analysis"};
    app.require_subcommand(1);

    auto* b = app.add_subcommand("build", "Build a Lexis-DAG with G-Lexis");
    add_common(b, cfg);
    add_baseline(b, cfg);
    b->add_option("--objective", cfg.objective, "Cost reported as the objective")
        ->check(CLI::IsMember({"edge", "concat"}))
        ->capture_default_str();

    auto* a = app.add_subcommand("analyze", "Rank intermediate nodes by path centrality");
    add_common(a, cfg);
    add_baseline(a, cfg);
    a->add_option("--top", cfg.top, "Keep only the k most central nodes (0 = all)")->capture_default_str();

    auto* k = app.add_subcommand("core", "Greedy core (G-Core)");
    add_common(k, cfg);
    add_baseline(k, cfg);
    add_tau(k, cfg);

    auto* c = app.add_subcommand("compress", "Dictionary compression ratios");
    add_common(c, cfg);
    add_baseline(c, cfg);
    c->add_option("--method", cfg.method, "dag, lr (n-gram candidates), lr-lexis (DAG node candidates) or all")
        ->check(CLI::IsMember({"dag", "lr", "lr-lexis", "all"}));
    c->add_option("--orders", cfg.orders, "n-gram orders for lr candidates")->capture_default_str();

    auto* f = app.add_subcommand("features", "Sparse count matrix over core or n-gram features");
    add_common(f, cfg);
    add_tau(f, cfg);
    f->add_option("--method", cfg.method, "core or ngrams")->check(CLI::IsMember({"core", "ngrams"}));
    f->add_option("--orders", cfg.orders, "n-gram orders for --method ngrams")->capture_default_str();

    auto* r = app.add_subcommand("randomize", "Original versus shuffled DAGs and node significance");
    add_common(r, cfg);
    r->add_option("--trials", cfg.trials, "Number of shuffled corpora")
        ->check(CLI::Range(std::size_t{1}, std::size_t{1000000}))
        ->capture_default_str();
    r->add_option("--alpha", cfg.alpha, "Significance level")->check(CLI::Range(0.0, 1.0))->capture_default_str();
    r->add_flag("--exact-pairs", cfg.exact_pairs, "Count exact (length, replacements) matches instead of dominance");

    auto* g = app.add_subcommand("generate", "Write a synthetic corpus");
    add_common(g, cfg, false);
    g->add_option("--kind", cfg.kind, "planted, motif or uniform")
        ->check(CLI::IsMember({"planted", "motif", "uniform"}))
        ->capture_default_str();
    auto pos = CLI::PositiveNumber;
    g->add_option("--alphabet", cfg.planted.alphabet_size, "Alphabet size")->check(pos);
    g->add_option("--depth", cfg.planted.depth, "Module levels (planted)")->check(pos);
    g->add_option("--modules", cfg.planted.modules_per_level, "Modules per level (planted)")->check(pos);
    g->add_option("--module-length", cfg.planted.module_length, "Parts per module (planted)")->check(pos);
    g->add_option("--targets", cfg.planted.targets, "Number of targets")->check(pos);
    g->add_option("--length", cfg.planted.target_length, "Symbols per target (planted, uniform)")->check(pos);
    g->add_option("--noise", cfg.planted.noise, "Noise fraction (planted)")->check(CLI::Range(0.0, 0.999999));
    g->add_option("--motif-length", cfg.motif.motif_length, "Motif length (motif)")->check(pos);
    g->add_option("--insertions", cfg.motif.insertions, "Motif insertions (motif)");
    g->add_option("--total-length", cfg.motif.total_length, "Corpus length (motif)")->check(pos);

    std::vector<std::string> argv_store{"lexis"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_store) {
        argv.push_back(s.data());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const auto code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    cfg.command = app.get_subcommands().front()->get_name();
    if (cfg.command == "generate") {
        // Generator options are shared between kinds; copy where they apply.
        const bool alphabet_given = g->get_option("--alphabet")->count() > 0;
        const bool targets_given = g->get_option("--targets")->count() > 0;
        const bool length_given = g->get_option("--length")->count() > 0;
        if (alphabet_given) {
            cfg.motif.alphabet_size = cfg.planted.alphabet_size;
            cfg.uniform_alphabet = cfg.planted.alphabet_size;
        }
        if (targets_given) {
            cfg.motif.targets = cfg.planted.targets;
            cfg.uniform_targets = cfg.planted.targets;
        }
        if (length_given) {
            cfg.uniform_length = cfg.planted.target_length;
        }
    }

    try {
        return dispatch(cfg, out, err);
    } catch (const usage_error& e) {
        err << cfg.command << ": " << e.what() << "\n";
        return exit_usage;
    } catch (const error& e) {
        err << cfg.command << ": " << e.what() << "\n";
        return exit_for(e.kind());
    } catch (const std::exception& e) {
        err << cfg.command << ": internal error: " << e.what() << "\n";
        return exit_internal;
    }
}

} // namespace lexis::cli
