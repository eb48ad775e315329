#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "lexis/dag.hpp"
#include "lexis/error.hpp"
#include "lexis/glexis.hpp"
#include "lexis/sequence.hpp"

namespace lexis {

enum class compression_method { dag_edges, compress_lr };

inline const char* to_string(compression_method m) {
    return m == compression_method::dag_edges ? "DagEdges" : "CompressLR";
}

// A token is a base symbol (>= 0) or a reference to dictionary entry k,
// encoded as -(k + 1). Every token and every stored symbol costs one unit.
using token = std::int64_t;

inline token reference_to(std::size_t entry) { return -static_cast<token>(entry) - 1; }
inline bool is_reference(token t) { return t < 0; }
inline std::size_t referenced_entry(token t) { return static_cast<std::size_t>(-(t + 1)); }

struct compression_result {
    compression_method method = compression_method::compress_lr;
    std::size_t original_size = 0;
    std::size_t compressed_size = 0;
    double ratio = 100.0; // percent
    std::vector<std::vector<token>> dictionary;
    std::vector<std::vector<token>> streams; // one per target
    std::vector<symbol_string> dictionary_strings; // entries expanded over the base alphabet
};

namespace detail {

inline std::size_t encoded_size(const compression_result& r) {
    std::size_t n = 0;
    for (const auto& s : r.streams) {
        n += s.size();
    }
    for (const auto& d : r.dictionary) {
        n += d.size();
    }
    return n;
}

inline void finish(compression_result& r) {
    r.compressed_size = encoded_size(r);
    r.ratio = r.original_size == 0 ? 100.0
                                   : 100.0 * static_cast<double>(r.compressed_size) /
                                         static_cast<double>(r.original_size);
}

// Left-to-right non-overlapping matches of a base-symbol pattern; references
// never match, so patterns cannot span a previous replacement.
template <typename OnMatch>
std::size_t scan_ltr(const std::vector<token>& stream, const symbol_string& pattern, OnMatch&& on_match) {
    const auto m = pattern.size();
    std::size_t count = 0;
    if (m == 0 || stream.size() < m) {
        return 0;
    }
    std::size_t i = 0;
    while (i + m <= stream.size()) {
        std::size_t j = 0;
        while (j < m && stream[i + j] == static_cast<token>(pattern[j])) {
            ++j;
        }
        if (j == m) {
            on_match(i);
            ++count;
            i += m;
        } else {
            ++i;
        }
    }
    return count;
}

inline std::int64_t lr_gain(std::size_t occurrences, std::size_t length) {
    // R|v| - R - |v| = (R - 1)(|v| - 1) - 1
    return static_cast<std::int64_t>(occurrences) * static_cast<std::int64_t>(length) -
           static_cast<std::int64_t>(occurrences) - static_cast<std::int64_t>(length);
}

} // namespace detail

// Greedy dictionary compression: repeatedly add the candidate with the highest
// gain over left-to-right non-overlapping occurrences in the current working
// strings, while the gain is at least 1. Replacement only removes base
// symbols, so a candidate's occurrence count never grows; the queue therefore
// holds upper bounds and re-evaluates lazily without changing the outcome.
// Ties: higher gain, then longer candidate, then earlier in `candidates`.
inline compression_result compress_lr(const corpus& c, const std::vector<symbol_string>& candidates) {
    for (const auto& cand : candidates) {
        if (cand.empty()) {
            throw error(error_kind::invalid_candidate, "empty candidate");
        }
        for (auto s : cand) {
            if (s >= c.alphabet.size()) {
                throw error(error_kind::invalid_candidate, "symbol id " + std::to_string(s) + " not in alphabet");
            }
        }
    }
    compression_result r;
    r.method = compression_method::compress_lr;
    r.original_size = c.total_length();
    for (const auto& t : c.targets) {
        r.streams.emplace_back(t.begin(), t.end());
    }

    std::vector<symbol_string> unique;
    {
        std::set<symbol_string> seen;
        for (const auto& cand : candidates) {
            if (seen.insert(cand).second) {
                unique.push_back(cand);
            }
        }
    }
    auto count_of = [&](const symbol_string& p) {
        std::size_t n = 0;
        for (const auto& s : r.streams) {
            n += detail::scan_ltr(s, p, [](std::size_t) {});
        }
        return n;
    };

    using key = std::tuple<std::int64_t, std::size_t, std::int64_t>; // gain, length, -index
    std::priority_queue<key> queue;
    for (std::size_t i = 0; i < unique.size(); ++i) {
        queue.emplace(detail::lr_gain(count_of(unique[i]), unique[i].size()), unique[i].size(),
                      -static_cast<std::int64_t>(i));
    }
    while (!queue.empty()) {
        auto [stale, len, neg_idx] = queue.top();
        queue.pop();
        const auto idx = static_cast<std::size_t>(-neg_idx);
        const auto& pat = unique[idx];
        const key fresh{detail::lr_gain(count_of(pat), len), len, neg_idx};
        if (!queue.empty() && fresh < queue.top()) {
            queue.push(fresh);
            continue;
        }
        if (std::get<0>(fresh) < 1) {
            break;
        }
        const auto entry = r.dictionary.size();
        r.dictionary.emplace_back(pat.begin(), pat.end());
        r.dictionary_strings.push_back(pat);
        for (auto& s : r.streams) {
            std::vector<token> next;
            next.reserve(s.size());
            std::size_t copied = 0;
            detail::scan_ltr(s, pat, [&](std::size_t at) {
                next.insert(next.end(), s.begin() + static_cast<std::ptrdiff_t>(copied),
                            s.begin() + static_cast<std::ptrdiff_t>(at));
                next.push_back(reference_to(entry));
                copied = at + pat.size();
            });
            next.insert(next.end(), s.begin() + static_cast<std::ptrdiff_t>(copied), s.end());
            s = std::move(next);
        }
    }
    detail::finish(r);
    return r;
}

// The DAG as an encoding: each intermediate is a dictionary entry holding I(v)
// and each target stream is I(target), so the size equals |E|.
inline compression_result compress_via_dag(const lexis_dag& dag) {
    compression_result r;
    r.method = compression_method::dag_edges;
    auto order = topological_order(dag);
    if (!order) {
        throw error(error_kind::validation_error, "cannot encode a cyclic graph");
    }
    std::map<node_id, std::size_t> entry_of;
    for (auto v : *order) {
        if (dag.kind(v) == node_kind::intermediate) {
            entry_of.emplace(v, entry_of.size());
        }
    }
    auto encode = [&](node_id v) {
        std::vector<token> out;
        for (const auto& e : dag.in_edges(v)) {
            if (dag.kind(e.from) == node_kind::source) {
                out.push_back(static_cast<token>(dag.string(e.from).front()));
            } else {
                out.push_back(reference_to(entry_of.at(e.from)));
            }
        }
        return out;
    };
    for (auto v : *order) {
        if (dag.kind(v) == node_kind::intermediate) {
            r.dictionary.push_back(encode(v));
            r.dictionary_strings.push_back(dag.string(v));
        }
    }
    for (auto t : dag.targets()) {
        r.streams.push_back(encode(t));
        r.original_size += dag.string(t).size();
    }
    detail::finish(r);
    return r;
}

// Expands every stream back to base symbols. Independent of how the result
// was produced.
inline std::vector<symbol_string> decompress(const compression_result& r) {
    std::vector<std::optional<symbol_string>> memo(r.dictionary.size());
    std::vector<char> active(r.dictionary.size(), 0);
    auto expand_entry = [&](auto&& self, std::size_t k) -> const symbol_string& {
        if (k >= r.dictionary.size()) {
            throw error(error_kind::parse_error, "reference to missing dictionary entry " + std::to_string(k));
        }
        if (memo[k]) {
            return *memo[k];
        }
        if (active[k]) {
            throw error(error_kind::parse_error, "cyclic dictionary entry " + std::to_string(k));
        }
        active[k] = 1;
        symbol_string out;
        for (auto t : r.dictionary[k]) {
            if (is_reference(t)) {
                const auto& sub = self(self, referenced_entry(t));
                out.insert(out.end(), sub.begin(), sub.end());
            } else {
                out.push_back(static_cast<symbol_id>(t));
            }
        }
        active[k] = 0;
        memo[k] = std::move(out);
        return *memo[k];
    };
    std::vector<symbol_string> out;
    out.reserve(r.streams.size());
    for (const auto& s : r.streams) {
        symbol_string t;
        for (auto tok : s) {
            if (is_reference(tok)) {
                const auto& sub = expand_entry(expand_entry, referenced_entry(tok));
                t.insert(t.end(), sub.begin(), sub.end());
            } else {
                t.push_back(static_cast<symbol_id>(tok));
            }
        }
        out.push_back(std::move(t));
    }
    return out;
}

// All distinct n-grams of the given orders, sorted (order, then symbols).
inline std::vector<symbol_string> ngram_candidates(const corpus& c, const std::vector<std::size_t>& orders) {
    std::set<std::pair<std::size_t, symbol_string>> grams;
    for (auto n : orders) {
        if (n == 0) {
            continue;
        }
        for (const auto& t : c.targets) {
            for (std::size_t i = 0; i + n <= t.size(); ++i) {
                grams.emplace(n, symbol_string(t.begin() + static_cast<std::ptrdiff_t>(i),
                                               t.begin() + static_cast<std::ptrdiff_t>(i + n)));
            }
        }
    }
    std::vector<symbol_string> out;
    out.reserve(grams.size());
    for (auto& [n, g] : grams) {
        out.push_back(g);
    }
    return out;
}

// Intermediate-node strings of the G-Lexis DAG, in creation order.
inline std::vector<symbol_string> lexis_node_candidates(const lexis_dag& dag) {
    std::vector<symbol_string> out;
    for (auto v : dag.intermediates()) {
        out.push_back(dag.string(v));
    }
    return out;
}

inline std::vector<symbol_string> lexis_node_candidates(const corpus& c) { return lexis_node_candidates(build(c).dag); }

} // namespace lexis
