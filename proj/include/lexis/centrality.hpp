#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lexis/dag.hpp"
#include "lexis/error.hpp"

namespace lexis {

using path_count = std::uint64_t;

namespace detail {

inline path_count checked_add(path_count a, path_count b) {
    path_count r;
    if (__builtin_add_overflow(a, b, &r)) {
        throw error(error_kind::overflow, "path count exceeds 64 bits");
    }
    return r;
}

inline path_count checked_mul(path_count a, path_count b) {
    path_count r;
    if (__builtin_mul_overflow(a, b, &r)) {
        throw error(error_kind::overflow, "path count exceeds 64 bits");
    }
    return r;
}

struct path_counts {
    std::vector<path_count> from_sources; // P_S
    std::vector<path_count> to_targets;   // P_T
    path_count total = 0;                 // source-to-target paths
};

// Two sweeps over a topological order. Nodes flagged in `removed` carry no
// paths, which is how G-Core evaluates the reduced DAG without mutating it.
inline path_counts count_paths(const lexis_dag& dag, const std::vector<node_id>& order,
                               const std::vector<char>& removed) {
    path_counts pc;
    pc.from_sources.assign(dag.size(), 0);
    pc.to_targets.assign(dag.size(), 0);
    for (auto v : order) {
        if (removed[v]) {
            continue;
        }
        if (dag.kind(v) == node_kind::source) {
            pc.from_sources[v] = 1;
            continue;
        }
        path_count s = 0;
        for (const auto& e : dag.in_edges(v)) {
            s = checked_add(s, pc.from_sources[e.from]);
        }
        pc.from_sources[v] = s;
        if (dag.kind(v) == node_kind::target) {
            pc.total = checked_add(pc.total, s);
        }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const auto v = *it;
        if (removed[v]) {
            continue;
        }
        if (dag.kind(v) == node_kind::target) {
            pc.to_targets[v] = 1;
        }
        const auto down = pc.to_targets[v];
        if (down == 0) {
            continue;
        }
        for (const auto& e : dag.in_edges(v)) {
            if (!removed[e.from]) {
                pc.to_targets[e.from] = checked_add(pc.to_targets[e.from], down);
            }
        }
    }
    return pc;
}

inline std::vector<node_id> checked_order(const lexis_dag& dag) {
    require_valid(dag);
    return *topological_order(dag);
}

} // namespace detail

struct centrality_entry {
    node_id node;
    std::string label;
    std::size_t length;
    path_count from_sources; // P_S
    path_count to_targets;   // P_T
    path_count centrality;   // P = P_S * P_T
};

// Ranking order used everywhere: P descending, then longer string, then
// smaller node id.
inline bool ranks_before(const centrality_entry& a, const centrality_entry& b) {
    if (a.centrality != b.centrality) {
        return a.centrality > b.centrality;
    }
    if (a.length != b.length) {
        return a.length > b.length;
    }
    return a.node < b.node;
}

struct centrality_report {
    std::vector<centrality_entry> ranking; // intermediates only
    path_count total_paths = 0;
};

inline centrality_report path_centrality(const lexis_dag& dag) {
    const auto order = detail::checked_order(dag);
    const std::vector<char> none(dag.size(), 0);
    const auto pc = detail::count_paths(dag, order, none);
    centrality_report rep;
    rep.total_paths = pc.total;
    for (auto v : dag.intermediates()) {
        rep.ranking.push_back({v, dag.label(v), dag.string(v).size(), pc.from_sources[v], pc.to_targets[v],
                               detail::checked_mul(pc.from_sources[v], pc.to_targets[v])});
    }
    std::sort(rep.ranking.begin(), rep.ranking.end(), ranks_before);
    return rep;
}

struct core_result {
    std::vector<node_id> core; // removal order
    double tau = 0;
    path_count paths_total = 0;
    path_count paths_remaining = 0;
    // Remaining paths before the first removal and after each removal.
    std::vector<path_count> remaining_history;
};

class core_infeasible : public error {
public:
    explicit core_infeasible(core_result partial)
        : error(error_kind::core_infeasible,
                std::to_string(partial.paths_remaining) + " of " + std::to_string(partial.paths_total) +
                    " paths avoid every intermediate node; tau=" + std::to_string(partial.tau) +
                    " cannot be met"),
          partial_(std::move(partial)) {}

    // The core reached before intermediates ran out.
    const core_result& partial() const noexcept { return partial_; }

private:
    core_result partial_;
};

inline bool within_tau(path_count remaining, path_count total, double tau) {
    return static_cast<long double>(remaining) <= static_cast<long double>(tau) * static_cast<long double>(total);
}

// Greedy core: remove the most central intermediate, recount on the reduced
// DAG, repeat until at most tau * |paths| source-to-target paths survive.
inline core_result g_core(const lexis_dag& dag, double tau) {
    if (!(tau >= 0.0 && tau <= 1.0)) {
        throw error(error_kind::invalid_argument, "tau must lie in [0, 1]");
    }
    const auto order = detail::checked_order(dag);
    std::vector<char> removed(dag.size(), 0);
    core_result res;
    res.tau = tau;
    const auto intermediates = dag.intermediates();
    for (;;) {
        const auto pc = detail::count_paths(dag, order, removed);
        if (res.remaining_history.empty()) {
            res.paths_total = pc.total;
        }
        res.paths_remaining = pc.total;
        res.remaining_history.push_back(pc.total);
        if (within_tau(pc.total, res.paths_total, tau)) {
            return res;
        }
        std::optional<centrality_entry> best;
        for (auto v : intermediates) {
            if (removed[v]) {
                continue;
            }
            const auto p = detail::checked_mul(pc.from_sources[v], pc.to_targets[v]);
            if (p == 0) {
                continue;
            }
            centrality_entry e{v, {}, dag.string(v).size(), pc.from_sources[v], pc.to_targets[v], p};
            if (!best || ranks_before(e, *best)) {
                best = e;
            }
        }
        if (!best) {
            throw core_infeasible(res);
        }
        removed[best->node] = 1;
        res.core.push_back(best->node);
    }
}

} // namespace lexis
