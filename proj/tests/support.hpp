#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lexis/lexis.hpp"

namespace lexis::test {

// Kind of the lexis::error thrown by f, or nullopt when nothing is thrown.
template <typename F>
std::optional<error_kind> error_of(F&& f) {
    try {
        f();
    } catch (const error& e) {
        return e.kind();
    }
    return std::nullopt;
}

inline corpus chars(std::vector<std::string> lines) { return ingest_char(lines); }

inline symbol_string syms(const corpus& c, const std::string& s) {
    symbol_string out;
    for (char ch : s) {
        out.push_back(*c.alphabet.find(std::string(1, ch)));
    }
    return out;
}

inline std::set<std::string> intermediate_labels(const lexis_dag& dag) {
    std::set<std::string> out;
    for (auto v : dag.intermediates()) {
        out.insert(dag.label(v));
    }
    return out;
}

inline std::vector<violation_kind> kinds_of(const std::vector<violation>& vs) {
    std::vector<violation_kind> out;
    for (const auto& v : vs) {
        out.push_back(v.kind);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Adds a node whose in-edges come from `members` with contiguous indices.
inline node_id add_composed(lexis_dag& dag, node_kind kind, const std::vector<node_id>& members) {
    symbol_string s;
    for (auto m : members) {
        const auto& ms = dag.string(m);
        s.insert(s.end(), ms.begin(), ms.end());
    }
    const auto v = dag.add_node(kind, s);
    std::size_t index = 1;
    for (auto m : members) {
        dag.add_edge(m, v, index);
        index += dag.string(m).size();
    }
    return v;
}

// Sources for every alphabet symbol, node id == symbol id.
inline lexis_dag sources_only(const corpus& c) {
    lexis_dag dag(c.alphabet, c.mode);
    for (symbol_id s = 0; s < c.alphabet.size(); ++s) {
        dag.add_node(node_kind::source, {s});
    }
    return dag;
}

inline bool expands_to_targets(const lexis_dag& dag, const corpus& c) {
    const auto ts = dag.targets();
    if (ts.size() != c.targets.size()) {
        return false;
    }
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (expand(dag, ts[i]) != c.targets[i]) {
            return false;
        }
    }
    return true;
}

} // namespace lexis::test
