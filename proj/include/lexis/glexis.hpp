#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "lexis/dag.hpp"
#include "lexis/error.hpp"
#include "lexis/parallel.hpp"
#include "lexis/repeat_index.hpp"
#include "lexis/sequence.hpp"

namespace lexis {

struct build_step {
    node_id node;                 // the new intermediate
    std::vector<node_id> seq;     // chosen repeat over node ids
    std::vector<std::string> members; // labels of seq members
    std::string label;            // expanded string of the new node
    std::size_t count_overlapping;
    std::size_t saved_cost;       // scoring value, overlapping counts
    std::size_t replaced;         // non-overlapping occurrences rewired
    std::size_t edge_cost;        // after the step
    std::size_t concat_cost;      // after the step
};

struct build_trace {
    std::vector<build_step> steps;
    std::size_t initial_edge_cost = 0;
    std::size_t initial_concat_cost = 0;
    std::size_t final_edge_cost = 0;
    std::size_t final_concat_cost = 0;
};

struct build_result {
    lexis_dag dag;
    build_trace trace;
};

enum class builder { glexis, longest_repeat };

struct build_options {
    builder strategy = builder::glexis;
    // Runs validate() after every step and throws on the first violation.
    bool check_each_step = false;
};

namespace detail {

inline std::vector<host_sequence> current_hosts(const lexis_dag& dag) {
    std::vector<host_sequence> hosts;
    for (node_id v = 0; v < dag.size(); ++v) {
        if (dag.contains(v) && dag.kind(v) != node_kind::source && dag.in_degree(v) >= 2) {
            hosts.push_back({v, dag.in_sequence(v)});
        }
    }
    return hosts;
}

} // namespace detail

// Greedy construction: start from the trivial DAG and repeatedly turn the best
// repeat of I_{T∪M} into a new intermediate node. A choice whose
// non-overlapping occurrences number fewer than two is skipped in favour of the
// next candidate. Stops when no repeat of length >= 2 has two non-overlapping
// occurrences.
inline build_result build(const corpus& c, const build_options& opts = {}) {
    build_result out{trivial_dag(c), {}};
    auto& dag = out.dag;
    auto& trace = out.trace;
    trace.initial_edge_cost = edge_cost(dag);
    trace.initial_concat_cost = concat_cost(dag);
    const auto rank = opts.strategy == builder::glexis ? candidate_rank::saved_cost : candidate_rank::longest;

    for (;;) {
        auto hosts = detail::current_hosts(dag);
        if (hosts.empty()) {
            break;
        }
        const repeat_index index(std::move(hosts));
        candidate_queue queue(index, rank);
        std::optional<repeat_index::interval> chosen;
        std::vector<occurrence_list> occ;
        std::size_t replaced = 0;
        while (auto iv = queue.pop()) {
            auto lists = index.nonoverlapping_occurrences(*iv);
            std::size_t r = 0;
            for (const auto& l : lists) {
                r += l.positions.size();
            }
            if (r >= 2) {
                chosen = iv;
                occ = std::move(lists);
                replaced = r;
                break;
            }
        }
        if (!chosen) {
            break;
        }
        auto seq = index.sequence_of(*chosen);
        std::vector<std::string> members;
        members.reserve(seq.size());
        for (auto m : seq) {
            members.push_back(dag.label(m));
        }
        const auto v = add_intermediate(dag, seq, occ);
        if (opts.check_each_step) {
            require_valid(dag);
        }
        trace.steps.push_back({v, std::move(seq), std::move(members), dag.label(v), chosen->count(),
                               chosen->saved_cost(), replaced, edge_cost(dag), concat_cost(dag)});
    }
    trace.final_edge_cost = edge_cost(dag);
    trace.final_concat_cost = concat_cost(dag);
    return out;
}

inline build_result build_longest_repeat(const corpus& c, build_options opts = {}) {
    opts.strategy = builder::longest_repeat;
    return build(c, opts);
}

struct dag_stats {
    double edge_cost = 0;
    double concat_cost = 0;
    double intermediates = 0;
    double depth = 0;
};

inline dag_stats stats_of(const lexis_dag& dag) {
    return {static_cast<double>(edge_cost(dag)), static_cast<double>(concat_cost(dag)),
            static_cast<double>(dag.intermediates().size()), static_cast<double>(dag_depth(dag))};
}

namespace detail {

inline dag_stats mean_stats(const std::vector<dag_stats>& runs) {
    dag_stats m;
    for (const auto& s : runs) {
        m.edge_cost += s.edge_cost;
        m.concat_cost += s.concat_cost;
        m.intermediates += s.intermediates;
        m.depth += s.depth;
    }
    if (!runs.empty()) {
        const auto n = static_cast<double>(runs.size());
        m.edge_cost /= n;
        m.concat_cost /= n;
        m.intermediates /= n;
        m.depth /= n;
    }
    return m;
}

} // namespace detail

struct randomization_report {
    dag_stats original;
    dag_stats randomized_mean;
    std::vector<dag_stats> trials;
    std::uint64_t seed = 0;
};

// Original DAG versus the mean over `trials` DAGs built from shuffled targets.
// Trial t shuffles with derive_seed(seed, t), so the report does not depend on
// `jobs`.
inline randomization_report compare_randomized(const corpus& c, std::size_t trials, std::uint64_t seed,
                                               std::size_t jobs = 1) {
    if (trials < 1) {
        throw error(error_kind::invalid_argument, "trials must be >= 1");
    }
    randomization_report rep;
    rep.seed = seed;
    rep.original = stats_of(build(c).dag);
    rep.trials = parallel_map(trials, jobs, [&](std::size_t t) {
        return stats_of(build(shuffle_targets(c, derive_seed(seed, t))).dag);
    });
    rep.randomized_mean = detail::mean_stats(rep.trials);
    return rep;
}

} // namespace lexis
