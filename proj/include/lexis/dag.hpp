#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lexis/error.hpp"
#include "lexis/sequence.hpp"

namespace lexis {

using node_id = std::uint32_t;

enum class node_kind { source, intermediate, target };

inline const char* to_string(node_kind k) {
    switch (k) {
    case node_kind::source: return "source";
    case node_kind::intermediate: return "intermediate";
    case node_kind::target: return "target";
    }
    return "unknown";
}

// Edge (from, to, index): string(from) starts at 1-based `index` inside string(to).
struct edge {
    node_id from;
    node_id to;
    std::size_t index;

    friend bool operator==(const edge&, const edge&) = default;
};

struct in_edge {
    node_id from;
    std::size_t index;

    friend bool operator==(const in_edge&, const in_edge&) = default;
};

// Positions are 1-based starts within I(host).
struct occurrence_list {
    node_id host;
    std::vector<std::size_t> positions;

    friend bool operator==(const occurrence_list&, const occurrence_list&) = default;
};

class lexis_dag {
public:
    struct node {
        node_kind kind = node_kind::source;
        symbol_string str;
        std::vector<in_edge> in; // sorted by index
        std::size_t out_degree = 0;
        bool alive = true;
    };

    lexis_dag() = default;
    lexis_dag(lexis::alphabet abc, split_mode mode) : alphabet_(std::move(abc)), mode_(mode) {}

    node_id add_node(node_kind kind, symbol_string str) {
        const auto id = static_cast<node_id>(nodes_.size());
        node n;
        n.kind = kind;
        n.str = std::move(str);
        if (kind == node_kind::source && n.str.size() == 1) {
            source_of_.emplace(n.str.front(), id);
        }
        nodes_.push_back(std::move(n));
        return id;
    }

    // Reserves an id that never becomes a live node (keeps ids stable on load).
    node_id add_tombstone() {
        const auto id = static_cast<node_id>(nodes_.size());
        node n;
        n.alive = false;
        nodes_.push_back(std::move(n));
        return id;
    }

    // Raw edge insertion, no invariant checks; validate() reports problems.
    void add_edge(node_id from, node_id to, std::size_t index) {
        auto& in = nodes_.at(to).in;
        const in_edge e{from, index};
        auto pos = std::upper_bound(in.begin(), in.end(), e,
                                    [](const in_edge& a, const in_edge& b) { return a.index < b.index; });
        in.insert(pos, e);
        nodes_.at(from).out_degree += 1;
    }

    std::size_t size() const noexcept { return nodes_.size(); }
    bool contains(node_id v) const noexcept { return v < nodes_.size() && nodes_[v].alive; }
    const node& at(node_id v) const { return nodes_.at(v); }
    node_kind kind(node_id v) const { return nodes_.at(v).kind; }
    const symbol_string& string(node_id v) const { return nodes_.at(v).str; }
    std::span<const in_edge> in_edges(node_id v) const { return nodes_.at(v).in; }
    std::size_t in_degree(node_id v) const { return nodes_.at(v).in.size(); }
    std::size_t out_degree(node_id v) const { return nodes_.at(v).out_degree; }

    // I(v): in-neighbours in index order.
    std::vector<node_id> in_sequence(node_id v) const {
        std::vector<node_id> seq;
        seq.reserve(nodes_.at(v).in.size());
        for (const auto& e : nodes_[v].in) {
            seq.push_back(e.from);
        }
        return seq;
    }

    std::vector<node_id> nodes_of(node_kind k) const {
        std::vector<node_id> out;
        for (node_id v = 0; v < nodes_.size(); ++v) {
            if (nodes_[v].alive && nodes_[v].kind == k) {
                out.push_back(v);
            }
        }
        return out;
    }
    std::vector<node_id> sources() const { return nodes_of(node_kind::source); }
    std::vector<node_id> intermediates() const { return nodes_of(node_kind::intermediate); }
    std::vector<node_id> targets() const { return nodes_of(node_kind::target); }

    std::optional<node_id> source_of(symbol_id s) const {
        auto it = source_of_.find(s);
        if (it == source_of_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    std::vector<edge> edges() const {
        std::vector<edge> out;
        for (node_id v = 0; v < nodes_.size(); ++v) {
            if (!nodes_[v].alive) {
                continue;
            }
            for (const auto& e : nodes_[v].in) {
                out.push_back({e.from, v, e.index});
            }
        }
        return out;
    }

    const lexis::alphabet& alphabet() const noexcept { return alphabet_; }
    split_mode mode() const noexcept { return mode_; }

    std::string label(node_id v) const { return render(alphabet_, string(v), mode_); }

    // The originating corpus: target strings in node-id order.
    lexis::corpus corpus() const {
        lexis::corpus c;
        c.alphabet = alphabet_;
        c.mode = mode_;
        for (auto t : targets()) {
            c.targets.push_back(string(t));
        }
        return c;
    }

    // Mutation hooks used by add_intermediate.
    node& mutable_node(node_id v) { return nodes_.at(v); }

    // Renumbers in-edge indices of v so they are contiguous.
    void reindex(node_id v) {
        std::size_t next = 1;
        for (auto& e : nodes_.at(v).in) {
            e.index = next;
            next += nodes_.at(e.from).str.size();
        }
    }

private:
    lexis::alphabet alphabet_;
    split_mode mode_ = split_mode::chars;
    std::vector<node> nodes_;
    std::unordered_map<symbol_id, node_id> source_of_;
};

// One source per alphabet symbol (node id == symbol id), one target per corpus
// target, one edge per symbol occurrence.
inline lexis_dag trivial_dag(const corpus& c) {
    lexis_dag dag(c.alphabet, c.mode);
    for (symbol_id s = 0; s < c.alphabet.size(); ++s) {
        dag.add_node(node_kind::source, {s});
    }
    for (const auto& t : c.targets) {
        const auto v = dag.add_node(node_kind::target, t);
        auto& n = dag.mutable_node(v);
        n.in.reserve(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) {
            n.in.push_back({t[i], i + 1});
            dag.mutable_node(t[i]).out_degree += 1;
        }
    }
    return dag;
}

inline std::size_t edge_cost(const lexis_dag& dag) {
    std::size_t n = 0;
    for (node_id v = 0; v < dag.size(); ++v) {
        if (dag.contains(v)) {
            n += dag.in_degree(v);
        }
    }
    return n;
}

inline std::size_t non_source_count(const lexis_dag& dag) {
    std::size_t n = 0;
    for (node_id v = 0; v < dag.size(); ++v) {
        if (dag.contains(v) && dag.kind(v) != node_kind::source) {
            ++n;
        }
    }
    return n;
}

// Sum over non-sources of (d_in - 1), i.e. |E| - |V \ V_S|.
inline std::size_t concat_cost(const lexis_dag& dag) {
    std::size_t n = 0;
    for (node_id v = 0; v < dag.size(); ++v) {
        if (dag.contains(v) && dag.kind(v) != node_kind::source && dag.in_degree(v) > 0) {
            n += dag.in_degree(v) - 1;
        }
    }
    return n;
}

// Kahn order over live nodes; nullopt when a cycle exists.
inline std::optional<std::vector<node_id>> topological_order(const lexis_dag& dag) {
    const auto n = dag.size();
    std::vector<std::size_t> pending(n, 0);
    std::vector<std::vector<node_id>> children(n);
    std::size_t live = 0;
    for (node_id v = 0; v < n; ++v) {
        if (!dag.contains(v)) {
            continue;
        }
        ++live;
        for (const auto& e : dag.in_edges(v)) {
            if (dag.contains(e.from)) {
                children[e.from].push_back(v);
                ++pending[v];
            }
        }
    }
    std::vector<node_id> order;
    order.reserve(live);
    for (node_id v = 0; v < n; ++v) {
        if (dag.contains(v) && pending[v] == 0) {
            order.push_back(v);
        }
    }
    for (std::size_t head = 0; head < order.size(); ++head) {
        for (auto w : children[order[head]]) {
            if (--pending[w] == 0) {
                order.push_back(w);
            }
        }
    }
    if (order.size() != live) {
        return std::nullopt;
    }
    return order;
}

// Maximum number of edges on any source-to-target path.
inline std::size_t dag_depth(const lexis_dag& dag) {
    auto order = topological_order(dag);
    if (!order) {
        throw error(error_kind::validation_error, "depth of a cyclic graph");
    }
    std::vector<std::size_t> dist(dag.size(), 0);
    std::size_t best = 0;
    for (auto v : *order) {
        for (const auto& e : dag.in_edges(v)) {
            dist[v] = std::max(dist[v], dist[e.from] + 1);
        }
        if (dag.kind(v) == node_kind::target) {
            best = std::max(best, dist[v]);
        }
    }
    return best;
}

// Expands v down to sources by following in-edges; independent of the stored
// node strings.
inline symbol_string expand(const lexis_dag& dag, node_id v) {
    symbol_string out;
    std::vector<node_id> stack{v};
    while (!stack.empty()) {
        const auto u = stack.back();
        stack.pop_back();
        if (dag.kind(u) == node_kind::source) {
            const auto& s = dag.string(u);
            out.insert(out.end(), s.begin(), s.end());
            continue;
        }
        const auto in = dag.in_edges(u);
        for (auto it = in.rbegin(); it != in.rend(); ++it) {
            stack.push_back(it->from);
        }
    }
    return out;
}

enum class violation_kind {
    dangling_edge,
    acyclicity,
    source_in_degree,
    source_string,
    target_out_degree,
    empty_node,
    index_range,
    index_contiguity,
    concat_mismatch,
    min_reuse,
};

inline const char* to_string(violation_kind k) {
    switch (k) {
    case violation_kind::dangling_edge: return "DanglingEdge";
    case violation_kind::acyclicity: return "Acyclicity";
    case violation_kind::source_in_degree: return "SourceInDegree";
    case violation_kind::source_string: return "SourceString";
    case violation_kind::target_out_degree: return "TargetOutDegree";
    case violation_kind::empty_node: return "EmptyNode";
    case violation_kind::index_range: return "IndexRange";
    case violation_kind::index_contiguity: return "IndexContiguity";
    case violation_kind::concat_mismatch: return "ConcatMismatch";
    case violation_kind::min_reuse: return "MinReuse";
    }
    return "Unknown";
}

struct violation {
    violation_kind kind;
    node_id node;
    std::optional<edge> at_edge;
    std::string message;
};

inline std::vector<violation> validate(const lexis_dag& dag) {
    std::vector<violation> out;
    auto report = [&](violation_kind k, node_id v, std::optional<edge> e, std::string msg) {
        out.push_back({k, v, e, std::move(msg)});
    };

    bool dangling = false;
    for (node_id v = 0; v < dag.size(); ++v) {
        if (!dag.contains(v)) {
            continue;
        }
        for (const auto& e : dag.in_edges(v)) {
            if (!dag.contains(e.from)) {
                dangling = true;
                report(violation_kind::dangling_edge, v, edge{e.from, v, e.index},
                       "edge from missing node " + std::to_string(e.from));
            }
        }
    }
    if (dangling) {
        return out;
    }

    if (!topological_order(dag)) {
        // Report every node that Kahn's algorithm could not release.
        std::vector<bool> ordered(dag.size(), false);
        std::vector<std::size_t> pending(dag.size(), 0);
        std::vector<std::vector<node_id>> children(dag.size());
        std::vector<node_id> queue;
        for (node_id v = 0; v < dag.size(); ++v) {
            if (!dag.contains(v)) {
                continue;
            }
            for (const auto& e : dag.in_edges(v)) {
                children[e.from].push_back(v);
                ++pending[v];
            }
        }
        for (node_id v = 0; v < dag.size(); ++v) {
            if (dag.contains(v) && pending[v] == 0) {
                queue.push_back(v);
            }
        }
        for (std::size_t h = 0; h < queue.size(); ++h) {
            ordered[queue[h]] = true;
            for (auto w : children[queue[h]]) {
                if (--pending[w] == 0) {
                    queue.push_back(w);
                }
            }
        }
        for (node_id v = 0; v < dag.size(); ++v) {
            if (dag.contains(v) && !ordered[v]) {
                report(violation_kind::acyclicity, v, std::nullopt, "node lies on a cycle");
            }
        }
    }

    for (node_id v = 0; v < dag.size(); ++v) {
        if (!dag.contains(v)) {
            continue;
        }
        const auto& n = dag.at(v);
        const auto id = std::to_string(v);
        if (n.kind == node_kind::source) {
            if (!n.in.empty()) {
                report(violation_kind::source_in_degree, v, std::nullopt, "source " + id + " has incoming edges");
            }
            if (n.str.size() != 1) {
                report(violation_kind::source_string, v, std::nullopt, "source " + id + " is not a single symbol");
            }
            continue;
        }
        if (n.kind == node_kind::target && n.out_degree != 0) {
            report(violation_kind::target_out_degree, v, std::nullopt, "target " + id + " has outgoing edges");
        }
        if (n.kind == node_kind::intermediate && n.out_degree < 2) {
            report(violation_kind::min_reuse, v, std::nullopt,
                   "intermediate " + id + " has out-degree " + std::to_string(n.out_degree));
        }
        if (n.in.empty()) {
            report(violation_kind::empty_node, v, std::nullopt, "node " + id + " has no incoming edges");
            continue;
        }
        std::size_t expected = 1;
        symbol_string concat;
        for (const auto& e : n.in) {
            const auto len = dag.string(e.from).size();
            const edge full{e.from, v, e.index};
            if (e.index < 1 || e.index + len - 1 > n.str.size()) {
                report(violation_kind::index_range, v, full, "edge index out of range");
            }
            if (e.index != expected) {
                report(violation_kind::index_contiguity, v, full,
                       "edge index " + std::to_string(e.index) + " expected " + std::to_string(expected));
            }
            expected += len;
            const auto& s = dag.string(e.from);
            concat.insert(concat.end(), s.begin(), s.end());
        }
        if (concat != n.str) {
            report(violation_kind::concat_mismatch, v, std::nullopt,
                   "string of " + id + " differs from concatenation of its in-neighbours");
        }
    }
    return out;
}

class validation_failure : public error {
public:
    explicit validation_failure(std::vector<violation> v)
        : error(error_kind::validation_error, summarize(v)), violations_(std::move(v)) {}

    const std::vector<violation>& violations() const noexcept { return violations_; }

private:
    static std::string summarize(const std::vector<violation>& v) {
        std::string msg = std::to_string(v.size()) + " violation(s)";
        for (std::size_t i = 0; i < v.size() && i < 8; ++i) {
            msg += "; ";
            msg += to_string(v[i].kind);
            msg += " at node " + std::to_string(v[i].node);
        }
        return msg;
    }

    std::vector<violation> violations_;
};

inline void require_valid(const lexis_dag& dag) {
    auto v = validate(dag);
    if (!v.empty()) {
        throw validation_failure(std::move(v));
    }
}

namespace detail {

// Splices I(u) into its only parent and retires u.
inline void inline_node(lexis_dag& dag, node_id u, node_id parent) {
    auto& p = dag.mutable_node(parent);
    auto it = std::find_if(p.in.begin(), p.in.end(), [u](const in_edge& e) { return e.from == u; });
    const auto children = dag.at(u).in;
    it = p.in.erase(it);
    p.in.insert(it, children.begin(), children.end());
    dag.reindex(parent);
    auto& n = dag.mutable_node(u);
    n.in.clear();
    n.out_degree = 0;
    n.alive = false;
}

} // namespace detail

// Creates an intermediate node for `seq` and rewires every listed occurrence to
// a single edge from it. Intermediates left with out-degree 1 by the rewiring
// are spliced into the new node so every intermediate keeps out-degree >= 2.
inline node_id add_intermediate(lexis_dag& dag, std::span<const node_id> seq,
                                std::span<const occurrence_list> occurrences) {
    if (seq.size() < 2) {
        throw error(error_kind::invalid_argument, "intermediate needs at least two members");
    }
    for (auto m : seq) {
        if (!dag.contains(m) || dag.kind(m) == node_kind::target) {
            throw error(error_kind::invalid_argument, "member " + std::to_string(m) + " cannot be reused");
        }
    }

    std::size_t total = 0;
    std::unordered_map<node_id, std::vector<std::size_t>> by_host;
    for (const auto& occ : occurrences) {
        if (!dag.contains(occ.host) || dag.kind(occ.host) == node_kind::source) {
            throw error(error_kind::invalid_argument, "host " + std::to_string(occ.host) + " is not a live non-source node");
        }
        auto& pos = by_host[occ.host];
        pos.insert(pos.end(), occ.positions.begin(), occ.positions.end());
        total += occ.positions.size();
    }
    if (total < 2) {
        throw error(error_kind::too_few_occurrences, std::to_string(total) + " occurrence(s) given");
    }
    for (auto& [host, pos] : by_host) {
        std::sort(pos.begin(), pos.end());
        const auto in = dag.in_edges(host);
        for (std::size_t k = 0; k < pos.size(); ++k) {
            if (k > 0 && pos[k] < pos[k - 1] + seq.size()) {
                throw error(error_kind::overlapping_occurrences,
                            "positions " + std::to_string(pos[k - 1]) + " and " + std::to_string(pos[k]) +
                                " in host " + std::to_string(host));
            }
            if (pos[k] < 1 || pos[k] - 1 + seq.size() > in.size()) {
                throw error(error_kind::occurrence_mismatch, "position " + std::to_string(pos[k]) + " out of range");
            }
            for (std::size_t j = 0; j < seq.size(); ++j) {
                if (in[pos[k] - 1 + j].from != seq[j]) {
                    throw error(error_kind::occurrence_mismatch, "host " + std::to_string(host) + " position " +
                                                                     std::to_string(pos[k]) + " does not match");
                }
            }
        }
    }

    symbol_string str;
    for (auto m : seq) {
        const auto& s = dag.string(m);
        str.insert(str.end(), s.begin(), s.end());
    }
    const auto sigma = dag.add_node(node_kind::intermediate, std::move(str));
    {
        std::size_t index = 1;
        for (auto m : seq) {
            dag.add_edge(m, sigma, index);
            index += dag.string(m).size();
        }
    }

    // Deterministic host order.
    std::vector<node_id> hosts;
    hosts.reserve(by_host.size());
    for (const auto& [h, _] : by_host) {
        hosts.push_back(h);
    }
    std::sort(hosts.begin(), hosts.end());
    for (auto h : hosts) {
        const auto& pos = by_host[h];
        auto& host = dag.mutable_node(h);
        std::vector<in_edge> rebuilt;
        rebuilt.reserve(host.in.size());
        std::size_t k = 0;
        for (std::size_t i = 0; i < host.in.size();) {
            if (k < pos.size() && i + 1 == pos[k]) {
                for (std::size_t j = 0; j < seq.size(); ++j) {
                    dag.mutable_node(seq[j]).out_degree -= 1;
                }
                rebuilt.push_back({sigma, 0});
                dag.mutable_node(sigma).out_degree += 1;
                i += seq.size();
                ++k;
            } else {
                rebuilt.push_back(host.in[i]);
                ++i;
            }
        }
        dag.mutable_node(h).in = std::move(rebuilt);
        dag.reindex(h);
    }

    std::vector<node_id> members(seq.begin(), seq.end());
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    for (auto m : members) {
        if (dag.kind(m) == node_kind::intermediate && dag.out_degree(m) < 2) {
            detail::inline_node(dag, m, sigma);
        }
    }
    return sigma;
}

} // namespace lexis
