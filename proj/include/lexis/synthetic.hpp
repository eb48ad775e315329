#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "lexis/error.hpp"
#include "lexis/random.hpp"
#include "lexis/sequence.hpp"

namespace lexis {

// Symbol labels for generated corpora. Up to 62 symbols are single characters
// (char mode); larger alphabets switch to "w<k>" tokens.
inline split_mode synthetic_mode(std::size_t alphabet_size) {
    return alphabet_size <= 62 ? split_mode::chars : split_mode::tokens;
}

inline std::string synthetic_label(std::size_t k, std::size_t alphabet_size) {
    static constexpr char chars[] = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
    if (alphabet_size <= 62) {
        return std::string(1, chars[k]);
    }
    return "w" + std::to_string(k);
}

namespace detail {

// Renders raw symbol indices and re-ingests them, so generated corpora have
// exactly the alphabet order a file round-trip would give.
inline corpus materialize(const std::vector<std::vector<std::size_t>>& raw, std::size_t alphabet_size) {
    const auto mode = synthetic_mode(alphabet_size);
    std::vector<std::string> lines;
    lines.reserve(raw.size());
    for (const auto& t : raw) {
        std::string line;
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (mode == split_mode::tokens && i > 0) {
                line += ' ';
            }
            line += synthetic_label(t[i], alphabet_size);
        }
        lines.push_back(std::move(line));
    }
    return ingest_lines(lines, mode);
}

inline symbol_string to_symbols(const corpus& c, const std::vector<std::size_t>& raw, std::size_t alphabet_size) {
    symbol_string out;
    out.reserve(raw.size());
    for (auto k : raw) {
        auto id = c.alphabet.find(synthetic_label(k, alphabet_size));
        if (!id) {
            throw error(error_kind::invalid_spec, "generated module uses a symbol absent from the corpus");
        }
        out.push_back(*id);
    }
    return out;
}

} // namespace detail

inline corpus gen_uniform(std::size_t alphabet_size, std::size_t targets, std::size_t length, std::uint64_t seed) {
    if (alphabet_size == 0 || targets == 0 || length == 0) {
        throw error(error_kind::invalid_spec, "alphabet size, target count and length must be >= 1");
    }
    rng gen(seed);
    std::vector<std::vector<std::size_t>> raw(targets, std::vector<std::size_t>(length));
    for (auto& t : raw) {
        for (auto& s : t) {
            s = gen.below(alphabet_size);
        }
    }
    return detail::materialize(raw, alphabet_size);
}

struct planted_hierarchy_spec {
    std::size_t alphabet_size = 8;
    std::size_t depth = 2;             // levels of modules
    std::size_t modules_per_level = 4;
    std::size_t module_length = 3;     // symbols per level-1 module, parts per higher module
    std::size_t targets = 20;
    std::size_t target_length = 250;   // minimum symbols per target
    double noise = 0.0;                // expected fraction of noise symbols
    std::uint64_t seed = 1;
};

struct planted_corpus {
    corpus docs;
    // modules[k] holds the level-(k+1) module strings; the last level is the
    // one targets are assembled from.
    std::vector<std::vector<symbol_string>> modules;
};

// Level-1 modules are random strings; each higher-level module concatenates
// `module_length` random modules of the level below. Targets are sequences of
// top-level modules, interleaved with single random noise symbols.
inline planted_corpus gen_planted(const planted_hierarchy_spec& spec) {
    if (spec.alphabet_size == 0 || spec.depth == 0 || spec.modules_per_level == 0 || spec.module_length == 0 ||
        spec.targets == 0 || spec.target_length == 0) {
        throw error(error_kind::invalid_spec, "all planted-hierarchy counts must be >= 1");
    }
    if (!(spec.noise >= 0.0 && spec.noise < 1.0)) {
        throw error(error_kind::invalid_spec, "noise fraction must lie in [0, 1)");
    }
    rng gen(spec.seed);
    using raw_string = std::vector<std::size_t>;
    std::vector<std::vector<raw_string>> levels;

    // Distinct modules when the space allows it; a few attempts otherwise.
    auto add_distinct = [&](std::vector<raw_string>& level, auto&& make) {
        std::set<raw_string> seen(level.begin(), level.end());
        for (int attempt = 0; attempt < 64; ++attempt) {
            auto m = make();
            if (seen.insert(m).second || attempt == 63) {
                level.push_back(std::move(m));
                return;
            }
        }
    };

    levels.emplace_back();
    for (std::size_t i = 0; i < spec.modules_per_level; ++i) {
        add_distinct(levels[0], [&] {
            raw_string m(spec.module_length);
            for (auto& s : m) {
                s = gen.below(spec.alphabet_size);
            }
            return m;
        });
    }
    for (std::size_t d = 1; d < spec.depth; ++d) {
        levels.emplace_back();
        for (std::size_t i = 0; i < spec.modules_per_level; ++i) {
            add_distinct(levels[d], [&] {
                raw_string m;
                for (std::size_t k = 0; k < spec.module_length; ++k) {
                    const auto& part = levels[d - 1][gen.below(levels[d - 1].size())];
                    m.insert(m.end(), part.begin(), part.end());
                }
                return m;
            });
        }
    }

    const auto& top = levels.back();
    double mean_top = 0;
    for (const auto& m : top) {
        mean_top += static_cast<double>(m.size());
    }
    mean_top /= static_cast<double>(top.size());
    // Probability that an emission is a noise symbol, chosen so noise symbols
    // make up `noise` of the output in expectation.
    const double q = spec.noise * mean_top / (1.0 - spec.noise + spec.noise * mean_top);

    std::vector<raw_string> raw(spec.targets);
    for (auto& t : raw) {
        while (t.size() < spec.target_length) {
            if (spec.noise > 0 && gen.unit() < q) {
                t.push_back(gen.below(spec.alphabet_size));
            } else {
                const auto& m = top[gen.below(top.size())];
                t.insert(t.end(), m.begin(), m.end());
            }
        }
    }

    planted_corpus out;
    out.docs = detail::materialize(raw, spec.alphabet_size);
    for (const auto& level : levels) {
        std::vector<symbol_string> mods;
        for (const auto& m : level) {
            mods.push_back(detail::to_symbols(out.docs, m, spec.alphabet_size));
        }
        out.modules.push_back(std::move(mods));
    }
    return out;
}

struct planted_motif_spec {
    std::size_t alphabet_size = 20;
    std::size_t motif_length = 12;
    std::size_t insertions = 30;
    std::size_t total_length = 10000;
    std::size_t targets = 20;
    std::uint64_t seed = 1;
};

struct motif_corpus {
    corpus docs;
    symbol_string motif;
};

// Uniform noise with one random motif inserted `insertions` times at random
// positions across the targets.
inline motif_corpus gen_motif(const planted_motif_spec& spec) {
    if (spec.alphabet_size == 0 || spec.motif_length == 0 || spec.targets == 0) {
        throw error(error_kind::invalid_spec, "alphabet size, motif length and target count must be >= 1");
    }
    const auto planted = spec.insertions * spec.motif_length;
    if (planted >= spec.total_length || spec.total_length - planted < spec.targets) {
        throw error(error_kind::invalid_spec, "total length too small for the requested insertions");
    }
    rng gen(spec.seed);
    std::vector<std::size_t> motif(spec.motif_length);
    for (auto& s : motif) {
        s = gen.below(spec.alphabet_size);
    }
    const auto noise_total = spec.total_length - planted;
    std::vector<std::size_t> per_target(spec.targets, noise_total / spec.targets);
    for (std::size_t k = 0; k < noise_total % spec.targets; ++k) {
        ++per_target[k];
    }
    std::vector<std::vector<std::size_t>> cuts(spec.targets);
    for (std::size_t i = 0; i < spec.insertions; ++i) {
        const auto t = gen.below(spec.targets);
        cuts[t].push_back(gen.below(per_target[t] + 1));
    }
    std::vector<std::vector<std::size_t>> raw(spec.targets);
    for (std::size_t t = 0; t < spec.targets; ++t) {
        std::sort(cuts[t].begin(), cuts[t].end());
        std::size_t next_cut = 0;
        for (std::size_t i = 0; i <= per_target[t]; ++i) {
            while (next_cut < cuts[t].size() && cuts[t][next_cut] == i) {
                raw[t].insert(raw[t].end(), motif.begin(), motif.end());
                ++next_cut;
            }
            if (i < per_target[t]) {
                raw[t].push_back(gen.below(spec.alphabet_size));
            }
        }
    }
    motif_corpus out;
    out.docs = detail::materialize(raw, spec.alphabet_size);
    out.motif = detail::to_symbols(out.docs, motif, spec.alphabet_size);
    return out;
}

} // namespace lexis
