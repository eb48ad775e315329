#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lexis/centrality.hpp"
#include "lexis/dag.hpp"
#include "lexis/error.hpp"
#include "lexis/glexis.hpp"
#include "lexis/parallel.hpp"
#include "lexis/random.hpp"
#include "lexis/sequence.hpp"

namespace lexis {

// (length, replacements) of an intermediate node; replacements = P_T.
struct length_replacements {
    std::size_t length;
    std::size_t replacements;

    friend auto operator<=>(const length_replacements&, const length_replacements&) = default;
};

// Which null event a p-value counts: some node with length >= l and
// replacements >= r (dominance), or some node with exactly (l, r).
enum class null_event { dominance, exact };

struct null_model {
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::vector<std::vector<length_replacements>> occurred; // per trial, sorted unique
    // Per trial: max_replacements[l] = max r over realized pairs with length >= l.
    std::vector<std::vector<std::size_t>> max_replacements;
};

inline std::vector<length_replacements> realized_pairs(const lexis_dag& dag) {
    const auto rep = path_centrality(dag);
    std::vector<length_replacements> pairs;
    pairs.reserve(rep.ranking.size());
    for (const auto& e : rep.ranking) {
        pairs.push_back({e.length, static_cast<std::size_t>(e.to_targets)});
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    return pairs;
}

namespace detail {

inline std::vector<std::size_t> dominance_frontier(const std::vector<length_replacements>& pairs) {
    std::size_t max_len = 0;
    for (const auto& p : pairs) {
        max_len = std::max(max_len, p.length);
    }
    std::vector<std::size_t> best(max_len + 2, 0);
    for (const auto& p : pairs) {
        best[p.length] = std::max(best[p.length], p.replacements);
    }
    for (std::size_t l = max_len; l-- > 0;) {
        best[l] = std::max(best[l], best[l + 1]);
    }
    return best;
}

} // namespace detail

// Trial t shuffles the targets with derive_seed(seed, t) and records the
// (length, replacements) pairs of its G-Lexis DAG.
inline null_model build_null(const corpus& c, std::size_t trials, std::uint64_t seed, std::size_t jobs = 1) {
    if (trials < 1) {
        throw error(error_kind::invalid_argument, "trials must be >= 1");
    }
    null_model m;
    m.trials = trials;
    m.seed = seed;
    m.occurred = parallel_map(trials, jobs, [&](std::size_t t) {
        return realized_pairs(build(shuffle_targets(c, derive_seed(seed, t))).dag);
    });
    m.max_replacements.reserve(trials);
    for (const auto& pairs : m.occurred) {
        m.max_replacements.push_back(detail::dominance_frontier(pairs));
    }
    return m;
}

struct randomization_run {
    randomization_report comparison;
    null_model null;
};

// compare_randomized and build_null in one pass: both use the same shuffled
// corpora for the same (seed, trial), so each trial DAG is built once.
inline randomization_run randomize(const corpus& c, std::size_t trials, std::uint64_t seed, std::size_t jobs = 1) {
    if (trials < 1) {
        throw error(error_kind::invalid_argument, "trials must be >= 1");
    }
    struct trial_result {
        dag_stats stats;
        std::vector<length_replacements> pairs;
    };
    auto results = parallel_map(trials, jobs, [&](std::size_t t) {
        const auto dag = build(shuffle_targets(c, derive_seed(seed, t))).dag;
        return trial_result{stats_of(dag), realized_pairs(dag)};
    });
    randomization_run run;
    auto& rep = run.comparison;
    rep.seed = seed;
    rep.original = stats_of(build(c).dag);
    run.null.trials = trials;
    run.null.seed = seed;
    for (auto& r : results) {
        rep.trials.push_back(r.stats);
        run.null.max_replacements.push_back(detail::dominance_frontier(r.pairs));
        run.null.occurred.push_back(std::move(r.pairs));
    }
    rep.randomized_mean = detail::mean_stats(rep.trials);
    return run;
}

// Fraction of trials in which the null event for (l, r) occurred.
inline double p_value(const null_model& m, std::size_t length, std::size_t replacements,
                      null_event event = null_event::dominance) {
    if (length < 2 || replacements < 2) {
        throw error(error_kind::invalid_argument, "intermediate nodes have length >= 2 and replacements >= 2");
    }
    if (m.trials == 0) {
        throw error(error_kind::invalid_argument, "empty null model");
    }
    std::size_t hits = 0;
    for (std::size_t t = 0; t < m.trials; ++t) {
        if (event == null_event::dominance) {
            const auto& best = m.max_replacements[t];
            hits += length < best.size() && best[length] >= replacements;
        } else {
            hits += std::binary_search(m.occurred[t].begin(), m.occurred[t].end(),
                                       length_replacements{length, replacements});
        }
    }
    return static_cast<double>(hits) / static_cast<double>(m.trials);
}

struct significance_row {
    node_id node;
    std::string label;
    std::size_t length;
    std::size_t replacements;
    double p;
    bool significant;
};

// A node is significant when p < alpha; a test at level alpha >= 1 rejects
// every null hypothesis.
inline bool is_significant(double p, double alpha) { return alpha >= 1.0 || p < alpha; }

inline std::vector<significance_row> significance_table(const lexis_dag& dag, const null_model& m, double alpha,
                                                        null_event event = null_event::dominance) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw error(error_kind::invalid_argument, "alpha must lie in [0, 1]");
    }
    const auto rep = path_centrality(dag);
    std::vector<significance_row> rows;
    rows.reserve(rep.ranking.size());
    for (const auto& e : rep.ranking) {
        const auto r = static_cast<std::size_t>(e.to_targets);
        const auto p = p_value(m, e.length, r, event);
        rows.push_back({e.node, e.label, e.length, r, p, is_significant(p, alpha)});
    }
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.node < b.node; });
    return rows;
}

inline std::vector<node_id> filter_significant(const lexis_dag& dag, const null_model& m, double alpha,
                                               null_event event = null_event::dominance) {
    std::vector<node_id> out;
    for (const auto& row : significance_table(dag, m, alpha, event)) {
        if (row.significant) {
            out.push_back(row.node);
        }
    }
    return out;
}

} // namespace lexis
