#include <gtest/gtest.h>

#include <limits>

#include "oracles.hpp"
#include "support.hpp"

using namespace lexis;
using namespace lexis::test;

namespace {

lexis_dag running() { return build(chars({"aabcaabdaabc"})).dag; }

node_id node_labelled(const lexis_dag& dag, const std::string& label) {
    for (auto v : dag.intermediates()) {
        if (dag.label(v) == label) {
            return v;
        }
    }
    throw std::runtime_error("no node " + label);
}

// Walks the derivation tree of every target and counts the uses of v, i.e.
// how many times v's string was substituted into the targets.
std::size_t replacements_in_targets(const lexis_dag& dag, node_id v) {
    std::size_t n = 0;
    std::vector<node_id> work = dag.targets();
    while (!work.empty()) {
        auto u = work.back();
        work.pop_back();
        for (const auto& e : dag.in_edges(u)) {
            if (e.from == v) {
                ++n;
            } else if (dag.kind(e.from) == node_kind::intermediate) {
                work.push_back(e.from);
            }
        }
    }
    return n;
}

} // namespace

TEST(Centrality, WorkedExample) {
    auto dag = running();
    auto rep = path_centrality(dag);
    ASSERT_EQ(rep.ranking.size(), 2u);
    EXPECT_EQ(rep.ranking[0].label, "aab");
    EXPECT_EQ(rep.ranking[0].from_sources, 3u);
    EXPECT_EQ(rep.ranking[0].to_targets, 3u);
    EXPECT_EQ(rep.ranking[0].centrality, 9u);
    EXPECT_EQ(rep.ranking[1].label, "aabc");
    EXPECT_EQ(rep.ranking[1].centrality, 8u);
    EXPECT_EQ(rep.total_paths, 12u);

    auto paths = oracle::enumerate_paths(dag);
    ASSERT_TRUE(paths);
    EXPECT_EQ(paths->total, 12u);
    EXPECT_EQ(paths->through[node_labelled(dag, "aab")], 9u);
    EXPECT_EQ(paths->through[node_labelled(dag, "aabc")], 8u);
    std::size_t via_sources = 0;
    for (auto s : dag.sources()) {
        via_sources += paths->through[s];
    }
    EXPECT_EQ(via_sources, 12u);
}

TEST(Centrality, TrivialDagHasNoIntermediates) {
    auto rep = path_centrality(trivial_dag(chars({"abcab"})));
    EXPECT_TRUE(rep.ranking.empty());
    EXPECT_EQ(rep.total_paths, 5u);
}

TEST(Centrality, RejectsInvalidDag) {
    auto c = chars({"ab"});
    auto dag = sources_only(c);
    const auto t = dag.add_node(node_kind::target, syms(c, "ab"));
    dag.add_edge(0, t, 1);
    EXPECT_EQ(error_of([&] { path_centrality(dag); }), error_kind::validation_error);
}

TEST(Centrality, TieBreakByLengthThenId) {
    centrality_entry a{5, "x", 2, 1, 4, 4}, b{3, "yy", 4, 4, 1, 4}, c{1, "zz", 4, 2, 2, 4};
    EXPECT_TRUE(ranks_before(b, a));
    EXPECT_TRUE(ranks_before(c, b));
    EXPECT_FALSE(ranks_before(a, c));
}

// Product formula against explicit path enumeration, the identity
// paths = L, and the structural reading P_S = |string|, P_T = replacements.
TEST(Centrality, MatchesPathEnumeration) {
    std::size_t compared = 0;
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        rng gen(seed);
        auto c = gen_uniform(2 + gen.below(5), 1 + gen.below(3), 2 + gen.below(60), seed + 77);
        auto dag = build(c).dag;
        auto rep = path_centrality(dag);
        EXPECT_EQ(rep.total_paths, c.total_length());
        for (const auto& e : rep.ranking) {
            EXPECT_EQ(e.from_sources, dag.string(e.node).size());
            EXPECT_EQ(e.to_targets, replacements_in_targets(dag, e.node));
        }
        auto paths = oracle::enumerate_paths(dag);
        if (!paths) {
            continue;
        }
        ++compared;
        EXPECT_EQ(paths->total, rep.total_paths);
        for (const auto& e : rep.ranking) {
            EXPECT_EQ(paths->through[e.node], e.centrality);
        }
    }
    EXPECT_GT(compared, 100u);
}

TEST(Core, WorkedExample) {
    auto dag = running();
    auto quarter = g_core(dag, 0.25);
    ASSERT_EQ(quarter.core.size(), 1u);
    EXPECT_EQ(dag.label(quarter.core[0]), "aab");
    EXPECT_EQ(quarter.paths_total, 12u);
    EXPECT_EQ(quarter.paths_remaining, 3u);

    // 0.05 * 12 < 1, and the direct 'd' path avoids every intermediate: the
    // core found is [aab, aabc] with 1 path left, reported as infeasible.
    try {
        g_core(dag, 0.05);
        FAIL();
    } catch (const core_infeasible& e) {
        const auto& tight = e.partial();
        ASSERT_EQ(tight.core.size(), 2u);
        EXPECT_EQ(dag.label(tight.core[0]), "aab");
        EXPECT_EQ(dag.label(tight.core[1]), "aabc");
        EXPECT_EQ(tight.paths_remaining, 1u);
        EXPECT_EQ(tight.remaining_history, (std::vector<path_count>{12, 3, 1}));
    }

    auto all = g_core(dag, 1.0);
    EXPECT_TRUE(all.core.empty());
    EXPECT_EQ(all.paths_remaining, 12u);
}

TEST(Core, RemainingPathsAgreeWithEnumeration) {
    auto dag = running();
    auto r = g_core(dag, 0.25);
    std::vector<char> removed(dag.size(), 0);
    for (auto v : r.core) {
        removed[v] = 1;
    }
    auto paths = oracle::enumerate_paths(dag, 10000, &removed);
    ASSERT_TRUE(paths);
    EXPECT_EQ(paths->total, r.paths_remaining);
}

TEST(Core, InfeasibleWhenDirectPathsRemain) {
    auto dag = running();
    try {
        g_core(dag, 0.0);
        FAIL();
    } catch (const core_infeasible& e) {
        EXPECT_EQ(e.kind(), error_kind::core_infeasible);
        EXPECT_EQ(e.partial().core.size(), 2u);
        EXPECT_EQ(e.partial().paths_remaining, 1u); // the direct 'd' edge
    }
    EXPECT_EQ(error_of([] { g_core(trivial_dag(chars({"ab"})), 0.5); }), error_kind::core_infeasible);
}

TEST(Core, TauZeroCutsEveryPath) {
    auto c = chars({"abab", "abab"});
    auto dag = build(c).dag;
    auto r = g_core(dag, 0.0);
    EXPECT_EQ(r.paths_remaining, 0u);
    std::vector<char> removed(dag.size(), 0);
    for (auto v : r.core) {
        removed[v] = 1;
    }
    auto paths = oracle::enumerate_paths(dag, 10000, &removed);
    ASSERT_TRUE(paths);
    EXPECT_EQ(paths->total, 0u);
}

TEST(Core, TauOutOfRange) {
    auto dag = running();
    EXPECT_EQ(error_of([&] { g_core(dag, -0.1); }), error_kind::invalid_argument);
    EXPECT_EQ(error_of([&] { g_core(dag, 1.5); }), error_kind::invalid_argument);
}

TEST(Core, HistoryNonIncreasingAndContract) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        auto c = gen_planted({.alphabet_size = 5, .depth = 2, .modules_per_level = 3, .module_length = 3,
                              .targets = 5, .target_length = 60, .seed = seed}).docs;
        auto dag = build(c).dag;
        for (double tau : {0.05, 0.25, 0.5, 0.95}) {
            core_result r;
            try {
                r = g_core(dag, tau);
                EXPECT_LE(static_cast<double>(r.paths_remaining), tau * static_cast<double>(r.paths_total));
            } catch (const core_infeasible& e) {
                r = e.partial();
            }
            for (std::size_t i = 1; i < r.remaining_history.size(); ++i) {
                EXPECT_LE(r.remaining_history[i], r.remaining_history[i - 1]);
            }
            EXPECT_EQ(r.paths_total, c.total_length());
        }
    }
}

TEST(Core, DoesNotMutateDag) {
    auto dag = running();
    const auto before = to_json(dag);
    g_core(dag, 0.25);
    EXPECT_EQ(to_json(dag), before);
}

// In a valid DAG every count is bounded by L (or L^2 for P), so overflow is
// only reachable through the arithmetic itself.
TEST(Centrality, CheckedArithmetic) {
    const auto big = std::numeric_limits<path_count>::max();
    EXPECT_EQ(error_of([&] { detail::checked_add(big, 1); }), error_kind::overflow);
    EXPECT_EQ(error_of([&] { detail::checked_mul(big / 2 + 1, 2); }), error_kind::overflow);
    EXPECT_EQ(detail::checked_mul(1ULL << 31, 1ULL << 32), 1ULL << 63);
}
