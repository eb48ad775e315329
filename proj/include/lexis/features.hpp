#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lexis/centrality.hpp"
#include "lexis/glexis.hpp"
#include "lexis/parallel.hpp"
#include "lexis/sequence.hpp"

namespace lexis {

// Features are kept as symbol labels so they apply to any corpus, including
// documents whose alphabet differs from the one the feature was mined from.
struct feature {
    std::vector<std::string> symbols;
    std::vector<std::string> classes; // provenance, in class order

    std::string text(split_mode mode) const {
        std::string out;
        for (std::size_t i = 0; i < symbols.size(); ++i) {
            if (mode == split_mode::tokens && i > 0) {
                out += ' ';
            }
            out += symbols[i];
        }
        return out;
    }
};

struct feature_set {
    std::vector<feature> features;
    std::vector<std::string> warnings;
};

struct labelled_corpus {
    std::string name;
    corpus docs;
};

struct matrix_entry {
    std::size_t row;
    std::size_t col;
    std::size_t count;

    friend bool operator==(const matrix_entry&, const matrix_entry&) = default;
};

// Sparse document-by-feature counts, 0-based in memory.
struct feature_matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<matrix_entry> entries; // row-major order
};

namespace detail {

inline std::vector<std::string> labels_of(const corpus& c, const symbol_string& s) {
    std::vector<std::string> out;
    out.reserve(s.size());
    for (auto id : s) {
        out.push_back(c.alphabet.label(id));
    }
    return out;
}

inline void merge_feature(std::vector<feature>& out, std::map<std::vector<std::string>, std::size_t>& seen,
                          std::vector<std::string> symbols, const std::string& cls) {
    auto it = seen.find(symbols);
    if (it == seen.end()) {
        seen.emplace(symbols, out.size());
        out.push_back({std::move(symbols), {cls}});
        return;
    }
    auto& classes = out[it->second].classes;
    if (std::find(classes.begin(), classes.end(), cls) == classes.end()) {
        classes.push_back(cls);
    }
}

} // namespace detail

// Per class: G-Lexis DAG, G-Core at `tau`, core strings. The union keeps the
// first occurrence of each string and records every contributing class.
// When tau cannot be met (paths that bypass all intermediates exceed it) the
// class contributes the core reached so far, with a warning.
inline feature_set extract_core_features(const std::vector<labelled_corpus>& classes, double tau,
                                         std::size_t jobs = 1) {
    if (!(tau >= 0.0 && tau <= 1.0)) {
        throw error(error_kind::invalid_argument, "tau must lie in [0, 1]");
    }
    struct class_core {
        std::vector<std::vector<std::string>> strings;
        std::string warning;
    };
    auto cores = parallel_map(classes.size(), jobs, [&](std::size_t k) {
        const auto& cls = classes[k];
        class_core out;
        auto built = build(cls.docs);
        if (built.dag.intermediates().empty()) {
            out.warning = "class '" + cls.name + "' has no intermediate nodes; empty core";
            return out;
        }
        core_result core;
        try {
            core = g_core(built.dag, tau);
        } catch (const core_infeasible& e) {
            core = e.partial();
            out.warning = "class '" + cls.name + "': " + e.what() + "; using the partial core";
        }
        for (auto v : core.core) {
            out.strings.push_back(detail::labels_of(cls.docs, built.dag.string(v)));
        }
        return out;
    });
    feature_set fs;
    std::map<std::vector<std::string>, std::size_t> seen;
    for (std::size_t k = 0; k < classes.size(); ++k) {
        if (!cores[k].warning.empty()) {
            fs.warnings.push_back(cores[k].warning);
        }
        for (auto& s : cores[k].strings) {
            detail::merge_feature(fs.features, seen, std::move(s), classes[k].name);
        }
    }
    return fs;
}

// All distinct n-grams of the requested orders (order 1 = bag of words).
inline feature_set ngram_features(const corpus& c, const std::set<std::size_t>& orders,
                                  const std::string& class_name = "all") {
    feature_set fs;
    std::map<std::vector<std::string>, std::size_t> seen;
    for (auto n : orders) {
        if (n == 0) {
            continue;
        }
        std::set<symbol_string> grams;
        for (const auto& t : c.targets) {
            for (std::size_t i = 0; i + n <= t.size(); ++i) {
                grams.emplace(t.begin() + static_cast<std::ptrdiff_t>(i),
                              t.begin() + static_cast<std::ptrdiff_t>(i + n));
            }
        }
        for (const auto& g : grams) {
            detail::merge_feature(fs.features, seen, detail::labels_of(c, g), class_name);
        }
    }
    return fs;
}

// Union in argument order; provenance classes are merged per string.
inline feature_set unite(const std::vector<feature_set>& parts) {
    feature_set fs;
    std::map<std::vector<std::string>, std::size_t> seen;
    for (const auto& part : parts) {
        fs.warnings.insert(fs.warnings.end(), part.warnings.begin(), part.warnings.end());
        for (const auto& f : part.features) {
            for (const auto& cls : f.classes) {
                detail::merge_feature(fs.features, seen, f.symbols, cls);
            }
        }
    }
    return fs;
}

// Left-to-right non-overlapping occurrence counts of every feature in every
// target. Pure string matching; no DAG involved.
inline feature_matrix count_matrix(const feature_set& fs, const corpus& docs) {
    feature_matrix m;
    m.rows = docs.targets.size();
    m.cols = fs.features.size();
    std::vector<std::optional<symbol_string>> patterns;
    patterns.reserve(fs.features.size());
    for (const auto& f : fs.features) {
        symbol_string p;
        bool known = !f.symbols.empty();
        for (const auto& label : f.symbols) {
            auto id = docs.alphabet.find(label);
            if (!id) {
                known = false;
                break;
            }
            p.push_back(*id);
        }
        patterns.push_back(known ? std::optional<symbol_string>(std::move(p)) : std::nullopt);
    }
    for (std::size_t row = 0; row < docs.targets.size(); ++row) {
        const auto& t = docs.targets[row];
        for (std::size_t col = 0; col < patterns.size(); ++col) {
            if (!patterns[col]) {
                continue;
            }
            const auto& p = *patterns[col];
            std::size_t count = 0;
            std::size_t i = 0;
            while (i + p.size() <= t.size()) {
                if (std::equal(p.begin(), p.end(), t.begin() + static_cast<std::ptrdiff_t>(i))) {
                    ++count;
                    i += p.size();
                } else {
                    ++i;
                }
            }
            if (count > 0) {
                m.entries.push_back({row, col, count});
            }
        }
    }
    return m;
}

// Text form: "rows cols nnz" then one "row col count" line per entry, 1-based.
inline std::string to_triplets(const feature_matrix& m) {
    std::string out = std::to_string(m.rows) + " " + std::to_string(m.cols) + " " + std::to_string(m.entries.size()) + "\n";
    for (const auto& e : m.entries) {
        out += std::to_string(e.row + 1) + " " + std::to_string(e.col + 1) + " " + std::to_string(e.count) + "\n";
    }
    return out;
}

} // namespace lexis
