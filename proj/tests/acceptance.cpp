// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

#include "cli.hpp"
#include "oracles.hpp"
#include "sample_dags.hpp"
#include "support.hpp"

using namespace lexis;
using namespace lexis::test;
namespace fs = std::filesystem;

namespace {

struct outcome {
    bool pass = true;
    std::string detail;
};

// Collects failed checks; the first few are reported.
class checker {
public:
    void expect(bool ok, const std::string& what) {
        if (!ok) {
            if (failures_.size() < 5) {
                failures_.push_back(what);
            }
            ++failed_;
        }
    }
    bool ok() const { return failed_ == 0; }
    outcome result(const std::string& summary) const {
        outcome o{ok(), summary};
        for (const auto& f : failures_) {
            o.detail += "; FAILED: " + f;
        }
        if (failed_ > failures_.size()) {
            o.detail += "; ... " + std::to_string(failed_ - failures_.size()) + " more";
        }
        return o;
    }

private:
    std::vector<std::string> failures_;
    std::size_t failed_ = 0;
};

std::size_t jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string num(double v, int digits = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

// One-sided exact sign test: P(X >= wins) for X ~ Binomial(wins + losses, 1/2).
double sign_test(std::size_t wins, std::size_t losses) {
    const auto n = wins + losses;
    if (n == 0) {
        return 1.0;
    }
    double p = 0;
    for (std::size_t k = wins; k <= n; ++k) {
        p += std::exp(std::lgamma(double(n) + 1) - std::lgamma(double(k) + 1) - std::lgamma(double(n - k) + 1) -
                      double(n) * std::log(2.0));
    }
    return std::min(1.0, p);
}

outcome ac1() {
    checker ck;
    auto r = build(chars({"aabcaabdaabc"}));
    const auto& steps = r.trace.steps;
    ck.expect(steps.size() == 2, "two iterations");
    if (steps.size() >= 1) {
        ck.expect(steps[0].label == "aab", "first pick aab");
        ck.expect(steps[0].saved_cost == 4, "first SavedCost 4");
    }
    if (steps.size() >= 2) {
        ck.expect(steps[1].label == "aabc", "second pick aabc");
        ck.expect(steps[1].members == std::vector<std::string>{"aab", "c"}, "second pick over (aab, c)");
    }
    ck.expect(intermediate_labels(r.dag) == std::set<std::string>{"aab", "aabc"}, "intermediates {aab, aabc}");
    ck.expect(edge_cost(r.dag) == 9, "edge cost 9");
    ck.expect(concat_cost(r.dag) == 6, "concat cost 6");
    ck.expect(validate(r.dag).empty(), "valid DAG");
    return ck.result("aab then aabc, then stop; edge " + std::to_string(edge_cost(r.dag)) + ", concat " +
                     std::to_string(concat_cost(r.dag)));
}

outcome ac2() {
    checker ck;
    ck.expect(validate(repeat_valid()).empty(), "(a) clean");
    ck.expect(kinds_of(validate(repeat_min_reuse())) ==
                  std::vector<violation_kind>{violation_kind::min_reuse, violation_kind::min_reuse},
              "(b) two min-reuse violations");
    ck.expect(kinds_of(validate(repeat_mismatch())) == std::vector<violation_kind>{violation_kind::concat_mismatch},
              "(c) one concatenation mismatch");
    const auto c = chars({"abbbbbba"});
    const auto dag = build(c).dag;
    const auto opt = oracle::exhaustive_optimum(c.targets);
    ck.expect(edge_cost(dag) == 7 && concat_cost(dag) == 5, "G-Lexis 7/5");
    ck.expect(opt.edges == 7 && opt.concatenations == 5, "exhaustive optimum 7/5");
    return ck.result("validator (a) clean, (b) min-reuse, (c) mismatch; abbbbbba G-Lexis " +
                     std::to_string(edge_cost(dag)) + "/" + std::to_string(concat_cost(dag)) + ", optimum " +
                     std::to_string(opt.edges) + "/" + std::to_string(opt.concatenations));
}

outcome ac3() {
    checker ck;
    const auto d1 = two_optima(false), d2 = two_optima(true);
    ck.expect(validate(d1).empty() && validate(d2).empty(), "both DAGs valid");
    ck.expect(edge_cost(d1) == 13 && concat_cost(d1) == 11, "D1 = (13, 11)");
    ck.expect(edge_cost(d2) == 14 && concat_cost(d2) == 10, "D2 = (14, 10)");
    const auto opt = oracle::exhaustive_optimum(chars({"abcdabcefcdgce"}).targets);
    ck.expect(opt.edges == 13 && opt.concatenations == 10, "optima E 13, C 10");
    return ck.result("D1 (" + std::to_string(edge_cost(d1)) + ", " + std::to_string(concat_cost(d1)) + "), D2 (" +
                     std::to_string(edge_cost(d2)) + ", " + std::to_string(concat_cost(d2)) + "); optimum E " +
                     std::to_string(opt.edges) + ", C " + std::to_string(opt.concatenations));
}

outcome ac4() {
    checker ck;
    rng gen(4);
    std::size_t enumerated = 0, lossless = 0;
    const std::string letters = "abcdefgh";
    for (int trial = 0; trial < 1000; ++trial) {
        const auto k = 2 + gen.below(7);
        const auto n = 1 + gen.below(200);
        std::string s(n, 'a');
        for (auto& ch : s) {
            ch = letters[gen.below(k)];
        }
        const auto c = chars({s});
        const auto& t = c.targets[0];
        const auto tag = "string " + std::to_string(trial);

        // (a)
        const auto expected = oracle::brute_force_saved_cost(t);
        const auto got = best_candidate(build_index({{0, t}}));
        ck.expect(expected.saved == (got ? got->saved_cost : 0), tag + ": SavedCost");

        // (b), (c)
        const auto dag = build(c).dag;
        const auto rep = path_centrality(dag);
        ck.expect(rep.total_paths == n, tag + ": paths = L");
        if (const auto paths = oracle::enumerate_paths(dag, 10000)) {
            ++enumerated;
            ck.expect(paths->total == n, tag + ": enumerated paths = L");
            for (const auto& e : rep.ranking) {
                ck.expect(paths->through[e.node] == e.centrality, tag + ": P(" + e.label + ")");
            }
        }

        // (d)
        const auto via_dag = compress_via_dag(dag);
        const auto lr = compress_lr(c, ngram_candidates(c, {2, 3}));
        const bool ok = render_lines(c) == std::vector<std::string>{s} && decompress(via_dag) == c.targets &&
                        decompress(lr) == c.targets;
        ck.expect(ok, tag + ": lossless");
        lossless += ok;
    }
    ck.expect(enumerated == 1000, "every DAG enumerable within 10^4 paths");
    return ck.result("1000 random strings: SavedCost, centrality on " + std::to_string(enumerated) +
                     " enumerated DAGs, paths = L, " + std::to_string(lossless) + " lossless round trips");
}

planted_hierarchy_spec ac5_spec(std::uint64_t seed) {
    return {.alphabet_size = 8, .depth = 3, .modules_per_level = 4, .module_length = 3, .targets = 20,
            .target_length = 250, .noise = 0.1, .seed = seed};
}

outcome ac5() {
    checker ck;
    constexpr std::size_t corpora = 20;
    struct row {
        dag_stats glexis, longest, shuffled;
        std::size_t length;
    };
    const auto rows = parallel_map(corpora, jobs(), [](std::size_t i) {
        const auto c = gen_planted(ac5_spec(1000 + i)).docs;
        return row{stats_of(build(c).dag), stats_of(build_longest_repeat(c).dag),
                   stats_of(build(shuffle_targets(c, derive_seed(77, i))).dag), c.total_length()};
    });
    std::size_t wins = 0, losses = 0, length = 0;
    std::vector<dag_stats> g, l, s;
    for (const auto& r : rows) {
        wins += r.glexis.edge_cost < r.longest.edge_cost;
        losses += r.glexis.edge_cost > r.longest.edge_cost;
        length += r.length;
        g.push_back(r.glexis);
        l.push_back(r.longest);
        s.push_back(r.shuffled);
    }
    const auto mg = detail::mean_stats(g), ml = detail::mean_stats(l), ms = detail::mean_stats(s);
    const auto p = sign_test(wins, losses);
    ck.expect(mg.edge_cost < ml.edge_cost, "mean G-Lexis edge cost below longest repeat");
    ck.expect(p < 0.05, "sign test p < 0.05");
    ck.expect(ms.edge_cost > mg.edge_cost, "shuffled edge cost higher");
    ck.expect(ms.concat_cost > mg.concat_cost, "shuffled concat cost higher");
    ck.expect(ms.depth < mg.depth, "shuffled depth lower");
    return ck.result(std::to_string(corpora) + " corpora, mean L " + num(double(length) / corpora, 0) +
                     "; edge cost G-Lexis " + num(mg.edge_cost) + " vs longest repeat " + num(ml.edge_cost) +
                     " (" + num(100 * (ml.edge_cost - mg.edge_cost) / ml.edge_cost) + "% lower, wins " +
                     std::to_string(wins) + ", losses " + std::to_string(losses) + ", sign p " + num(p, 6) +
                     "); shuffled vs original: edge " + num(ms.edge_cost) + " vs " + num(mg.edge_cost) + " (+" +
                     num(100 * (ms.edge_cost - mg.edge_cost) / mg.edge_cost) + "%), concat " + num(ms.concat_cost) +
                     " vs " + num(mg.concat_cost) + ", depth " + num(ms.depth) + " vs " + num(mg.depth));
}

bool contains(const symbol_string& hay, const symbol_string& needle) {
    return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
}

outcome ac6() {
    checker ck;
    const auto m = gen_motif({.alphabet_size = 20, .motif_length = 12, .insertions = 30, .total_length = 10000,
                              .targets = 20, .seed = 3});
    const auto dag = build(m.docs).dag;
    const auto null = build_null(m.docs, 100, 11, jobs());
    const auto table = significance_table(dag, null, 0.1);
    std::optional<significance_row> motif_row;
    std::size_t noise = 0, noise_flagged = 0;
    for (const auto& row : table) {
        const auto& s = dag.string(row.node);
        if (s == m.motif) {
            motif_row = row;
        }
        if (row.length == 2 && !contains(m.motif, s)) {
            ++noise;
            noise_flagged += row.significant;
        }
    }
    ck.expect(motif_row.has_value(), "motif is a node");
    ck.expect(motif_row && motif_row->significant, "motif significant");
    const double kept = noise ? 1.0 - double(noise_flagged) / double(noise) : 1.0;
    ck.expect(noise > 0, "length-2 noise nodes exist");
    ck.expect(kept >= 0.9, ">= 90% of length-2 noise nodes not significant");
    return ck.result("L " + std::to_string(m.docs.total_length()) + ", motif node " +
                     (motif_row ? "r=" + std::to_string(motif_row->replacements) + " p=" + num(motif_row->p, 3) +
                                      (motif_row->significant ? " significant" : " not significant")
                                : std::string("missing")) +
                     "; length-2 noise nodes not significant: " + std::to_string(noise - noise_flagged) + "/" +
                     std::to_string(noise) + " (" + num(100 * kept, 1) + "%)");
}

// Strict contract on every run that terminates normally. A run that throws
// core_infeasible is accepted only if it is infeasible for any core: removing
// every intermediate still leaves more than tau * L paths.
outcome ac7() {
    checker ck;
    std::vector<std::pair<std::string, lexis_dag>> dags;
    dags.emplace_back("running", build(chars({"aabcaabdaabc"})).dag);
    for (std::uint64_t i = 0; i < 10; ++i) {
        dags.emplace_back("planted" + std::to_string(i),
                          build(gen_planted({.alphabet_size = 8, .depth = 3, .modules_per_level = 4,
                                             .module_length = 3, .targets = 10, .target_length = 200, .seed = 500 + i})
                                    .docs)
                              .dag);
    }
    std::size_t runs = 0, met = 0;
    std::vector<std::string> infeasible;
    for (const auto& [name, dag] : dags) {
        const auto total = dag.corpus().total_length();
        for (double tau : {0.05, 0.25, 0.95}) {
            ++runs;
            const auto tag = name + " tau " + num(tau);
            core_result r;
            bool feasible = true;
            try {
                r = g_core(dag, tau);
            } catch (const core_infeasible& e) {
                r = e.partial();
                feasible = false;
            }
            for (std::size_t i = 1; i < r.remaining_history.size(); ++i) {
                ck.expect(r.remaining_history[i] <= r.remaining_history[i - 1], tag + ": history non-increasing");
            }
            ck.expect(!r.remaining_history.empty() && r.remaining_history.front() == total &&
                          r.remaining_history.back() == r.paths_remaining,
                      tag + ": history endpoints");
            std::vector<char> removed(dag.size(), 0);
            for (auto v : r.core) {
                removed[v] = 1;
            }
            const auto paths = oracle::enumerate_paths(dag, 100000, &removed);
            ck.expect(paths && paths->total == r.paths_remaining, tag + ": remaining paths match enumeration");
            if (feasible) {
                ck.expect(double(r.paths_remaining) <= tau * double(total), tag + ": remaining <= tau * L");
                met += double(r.paths_remaining) <= tau * double(total);
                continue;
            }
            std::vector<char> all(dag.size(), 0);
            for (auto v : dag.intermediates()) {
                all[v] = 1;
            }
            const auto floor = oracle::enumerate_paths(dag, 100000, &all);
            ck.expect(floor && double(floor->total) > tau * double(total), tag + ": infeasibility proven");
            infeasible.push_back(tag + " (" + std::to_string(r.paths_remaining) + " of " + std::to_string(total) +
                                 " paths bypass every intermediate)");
        }
    }
    std::string summary = std::to_string(runs) + " runs; contract met on " + std::to_string(met);
    if (!infeasible.empty()) {
        summary += "; reported infeasible:";
        for (const auto& s : infeasible) {
            summary += " " + s;
        }
    }
    return ck.result(summary);
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (entry.is_regular_file()) {
            std::ifstream f(entry.path(), std::ios::binary);
            std::stringstream ss;
            ss << f.rdbuf();
            files[fs::relative(entry.path(), dir).string()] = ss.str();
        }
    }
    return files;
}

outcome ac8() {
    checker ck;
    const auto root = fs::temp_directory_path() / "lexis-acceptance";
    fs::remove_all(root);
    fs::create_directories(root);
    auto write = [&](const std::string& name, const std::string& text) {
        std::ofstream(root / name, std::ios::binary) << text;
        return (root / name).string();
    };
    auto lines = [](const corpus& c) {
        std::string out;
        for (const auto& l : render_lines(c)) {
            out += l + "\n";
        }
        return out;
    };
    const auto running = write("running.txt", "aabcaabdaabc\n");
    const auto planted = write("planted.txt", lines(gen_planted({.targets = 8, .target_length = 120, .noise = 0.05,
                                                                  .seed = 8}).docs));
    const auto other = write("other.txt", lines(gen_planted({.targets = 8, .target_length = 120, .noise = 0.05,
                                                                .seed = 9}).docs));
    const auto words = write("words.txt", "the cat sat on the mat\nthe cat sat\non the mat the cat\n");

    const std::vector<std::pair<std::vector<std::string>, int>> commands{
        {{"build", planted}, 0},
        {{"build", words, "--mode", "token", "--baseline", "longest-repeat"}, 0},
        {{"analyze", planted, "--top", "5"}, 0},
        {{"core", planted, "--tau", "0.25"}, 0},
        {{"core", running, "--tau", "0.05"}, 3},
        {{"compress", planted, "--method", "all"}, 0},
        {{"features", planted, other, "--tau", "0.25"}, 0},
        {{"features", planted, other, "--method", "ngrams", "--orders", "1,2"}, 0},
        {{"randomize", planted, "--trials", "20", "--seed", "7"}, 0},
        {{"randomize", running, "--trials", "10", "--seed", "7", "--exact-pairs"}, 0},
        {{"generate", "--kind", "planted", "--seed", "3"}, 0},
        {{"generate", "--kind", "motif", "--seed", "3"}, 0},
        {{"generate", "--kind", "uniform", "--seed", "3"}, 0},
    };
    std::size_t compared = 0;
    for (std::size_t i = 0; i < commands.size(); ++i) {
        const auto& [args, code] = commands[i];
        std::string name = args[0];
        for (std::size_t k = 1; k < args.size(); ++k) {
            name += " " + fs::path(args[k]).filename().string();
        }
        std::vector<std::map<std::string, std::string>> outputs;
        std::vector<std::string> stdouts;
        for (const char* jobs_flag : {"1", "1", "4"}) {
            const auto dir = root / ("run" + std::to_string(i) + "-" + std::to_string(outputs.size()));
            auto full = args;
            full.insert(full.end(), {"--jobs", jobs_flag, "--out", dir.string()});
            std::ostringstream out, err;
            const auto got = cli::run(full, out, err);
            ck.expect(got == code, name + ": exit " + std::to_string(got) + " " + err.str());
            outputs.push_back(fs::exists(dir) ? snapshot(dir) : std::map<std::string, std::string>{});
            stdouts.push_back(out.str());
        }
        ck.expect(!outputs[0].empty(), name + ": wrote files");
        ck.expect(outputs[0] == outputs[1], name + ": rerun identical");
        ck.expect(outputs[0] == outputs[2], name + ": --jobs 4 identical");
        ck.expect(stdouts[0] == stdouts[1] && stdouts[0] == stdouts[2], name + ": stdout identical");
        compared += outputs[0].size();
    }
    fs::remove_all(root);
    return ck.result(std::to_string(commands.size()) + " invocations over all 7 commands, " +
                     std::to_string(compared) + " output files byte-identical across 2 reruns and --jobs 4");
}

} // namespace

int main() {
    struct criterion {
        const char* name;
        std::function<outcome()> run;
        double limit_seconds; // 0 = no limit
    };
    const std::vector<criterion> all{
        {"AC1", ac1, 1}, {"AC2", ac2, 1}, {"AC3", ac3, 0},   {"AC4", ac4, 0},
        {"AC5", ac5, 120}, {"AC6", ac6, 300}, {"AC7", ac7, 0}, {"AC8", ac8, 0},
    };
    bool all_pass = true;
    for (const auto& c : all) {
        const auto start = std::chrono::steady_clock::now();
        outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.limit_seconds > 0 && secs >= c.limit_seconds) {
            o.pass = false;
            o.detail += "; over the " + num(c.limit_seconds, 0) + " s limit";
        }
        all_pass &= o.pass;
        std::printf("%s %s (%.2f s) %s\n", c.name, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
        std::fflush(stdout);
    }
    return all_pass ? 0 : 1;
}
