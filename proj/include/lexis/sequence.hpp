#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lexis/error.hpp"
#include "lexis/random.hpp"

namespace lexis {

using symbol_id = std::uint32_t;
using symbol_string = std::vector<symbol_id>;

// How targets were split into symbols. Determines how a symbol sequence is
// rendered back to text.
enum class split_mode { chars, tokens };

class alphabet {
public:
    alphabet() = default;

    // Returns the id of `label`, adding it if unseen.
    symbol_id intern(std::string_view label) {
        if (label.empty()) {
            throw error(error_kind::invalid_argument, "alphabet labels must be non-empty");
        }
        auto it = lookup_.find(std::string(label));
        if (it != lookup_.end()) {
            return it->second;
        }
        const auto id = static_cast<symbol_id>(symbols_.size());
        symbols_.emplace_back(label);
        lookup_.emplace(symbols_.back(), id);
        return id;
    }

    std::optional<symbol_id> find(std::string_view label) const {
        auto it = lookup_.find(std::string(label));
        if (it == lookup_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    const std::string& label(symbol_id id) const { return symbols_.at(id); }
    const std::vector<std::string>& labels() const noexcept { return symbols_; }
    std::size_t size() const noexcept { return symbols_.size(); }

    friend bool operator==(const alphabet& a, const alphabet& b) { return a.symbols_ == b.symbols_; }

private:
    std::vector<std::string> symbols_;
    std::unordered_map<std::string, symbol_id> lookup_;
};

struct corpus {
    lexis::alphabet alphabet;
    std::vector<symbol_string> targets;
    split_mode mode = split_mode::chars;

    std::size_t total_length() const noexcept {
        std::size_t n = 0;
        for (const auto& t : targets) {
            n += t.size();
        }
        return n;
    }

    friend bool operator==(const corpus&, const corpus&) = default;
};

// Joins symbol labels; tokens are space separated, characters are not.
inline std::string render(const alphabet& abc, std::span<const symbol_id> s, split_mode mode) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (mode == split_mode::tokens && i > 0) {
            out += ' ';
        }
        out += abc.label(s[i]);
    }
    return out;
}

inline std::string render(const corpus& c, std::span<const symbol_id> s) {
    return render(c.alphabet, s, c.mode);
}

inline std::vector<std::string> render_lines(const corpus& c) {
    std::vector<std::string> lines;
    lines.reserve(c.targets.size());
    for (const auto& t : c.targets) {
        lines.push_back(render(c, t));
    }
    return lines;
}

namespace detail {

// Splits UTF-8 text into code points. Malformed bytes become single-byte units.
inline std::vector<std::string_view> utf8_units(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < text.size()) {
        const auto lead = static_cast<unsigned char>(text[i]);
        std::size_t len = 1;
        if (lead >= 0xF0 && lead < 0xF8) {
            len = 4;
        } else if (lead >= 0xE0) {
            len = lead < 0xF0 ? 3 : 1;
        } else if (lead >= 0xC0) {
            len = 2;
        }
        if (i + len > text.size()) {
            len = 1;
        }
        for (std::size_t k = 1; k < len; ++k) {
            if ((static_cast<unsigned char>(text[i + k]) & 0xC0) != 0x80) {
                len = 1;
                break;
            }
        }
        out.push_back(text.substr(i, len));
        i += len;
    }
    return out;
}

inline std::string_view strip_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') {
        line.remove_suffix(1);
    }
    return line;
}

} // namespace detail

// One target per line, one symbol per character (UTF-8 code point).
inline corpus ingest_char(const std::vector<std::string>& lines) {
    if (lines.empty()) {
        throw error(error_kind::empty_corpus, "no targets in input");
    }
    corpus c;
    c.mode = split_mode::chars;
    c.targets.reserve(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto line = detail::strip_cr(lines[i]);
        if (line.empty()) {
            throw empty_target_error(i);
        }
        symbol_string t;
        for (auto unit : detail::utf8_units(line)) {
            t.push_back(c.alphabet.intern(unit));
        }
        c.targets.push_back(std::move(t));
    }
    return c;
}

inline corpus ingest_tokens(const std::vector<std::vector<std::string>>& token_lines) {
    if (token_lines.empty()) {
        throw error(error_kind::empty_corpus, "no targets in input");
    }
    corpus c;
    c.mode = split_mode::tokens;
    for (std::size_t i = 0; i < token_lines.size(); ++i) {
        if (token_lines[i].empty()) {
            throw empty_target_error(i);
        }
        symbol_string t;
        t.reserve(token_lines[i].size());
        for (const auto& tok : token_lines[i]) {
            t.push_back(c.alphabet.intern(tok));
        }
        c.targets.push_back(std::move(t));
    }
    return c;
}

inline std::vector<std::string> split_whitespace(std::string_view line) {
    std::vector<std::string> out;
    std::size_t i = 0;
    auto is_space = [](char ch) { return ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n' || ch == '\f' || ch == '\v'; };
    while (i < line.size()) {
        while (i < line.size() && is_space(line[i])) {
            ++i;
        }
        std::size_t j = i;
        while (j < line.size() && !is_space(line[j])) {
            ++j;
        }
        if (j > i) {
            out.emplace_back(line.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

inline corpus ingest_lines(const std::vector<std::string>& lines, split_mode mode) {
    if (mode == split_mode::chars) {
        return ingest_char(lines);
    }
    std::vector<std::vector<std::string>> toks;
    toks.reserve(lines.size());
    for (const auto& l : lines) {
        toks.push_back(split_whitespace(l));
    }
    return ingest_tokens(toks);
}

// Fisher-Yates per target; each target draws from its own derived stream.
inline corpus shuffle_targets(const corpus& c, std::uint64_t seed) {
    corpus out = c;
    for (std::size_t t = 0; t < out.targets.size(); ++t) {
        rng gen(derive_seed(seed, t));
        auto& s = out.targets[t];
        for (std::size_t i = s.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(gen.below(i));
            std::swap(s[i - 1], s[j]);
        }
    }
    return out;
}

} // namespace lexis
