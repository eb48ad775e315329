#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <utility>
#include <vector>

#include "lexis/dag.hpp"
#include "lexis/error.hpp"
#include "lexis/suffix_array.hpp"

namespace lexis {

struct repeat_candidate {
    std::vector<node_id> seq;
    std::size_t count_overlapping = 0;
    std::size_t saved_cost = 0; // (count_overlapping - 1)(|seq| - 1)

    friend bool operator==(const repeat_candidate&, const repeat_candidate&) = default;
};

struct host_sequence {
    node_id host;
    std::vector<node_id> seq;
};

// Suffix array + LCP over the concatenation of all host sequences, each
// followed by its own sentinel. Sentinels are distinct and larger than every
// node id, so no repeat can straddle two hosts.
class repeat_index {
public:
    // A right-maximal repeat: the LCP interval [lb, rb] of suffixes sharing a
    // prefix of length `length`.
    struct interval {
        std::int32_t lb;
        std::int32_t rb;
        std::int32_t length;

        std::size_t count() const noexcept { return static_cast<std::size_t>(rb - lb + 1); }
        std::size_t saved_cost() const noexcept { return (count() - 1) * static_cast<std::size_t>(length - 1); }
    };

    explicit repeat_index(std::vector<host_sequence> sequences) : hosts_(std::move(sequences)) {
        if (hosts_.empty()) {
            throw error(error_kind::invalid_argument, "repeat index needs at least one sequence");
        }
        std::int64_t max_id = -1;
        std::size_t total = 0;
        for (const auto& h : hosts_) {
            for (auto v : h.seq) {
                max_id = std::max<std::int64_t>(max_id, v);
            }
            total += h.seq.size() + 1;
        }
        if (max_id + static_cast<std::int64_t>(hosts_.size()) + 1 > std::numeric_limits<std::int32_t>::max() ||
            total > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max())) {
            throw error(error_kind::overflow, "repeat index input too large");
        }
        text_.reserve(total);
        owner_.reserve(total);
        starts_.reserve(hosts_.size());
        const auto first_sentinel = static_cast<std::int32_t>(max_id + 1);
        for (std::size_t k = 0; k < hosts_.size(); ++k) {
            starts_.push_back(static_cast<std::int32_t>(text_.size()));
            for (auto v : hosts_[k].seq) {
                text_.push_back(static_cast<std::int32_t>(v));
                owner_.push_back(static_cast<std::int32_t>(k));
            }
            text_.push_back(first_sentinel + static_cast<std::int32_t>(k));
            owner_.push_back(static_cast<std::int32_t>(k));
        }
        const auto upper = first_sentinel + static_cast<std::int32_t>(hosts_.size()) - 1;
        sa_ = suffix_array(text_, upper);
        lcp_ = lcp_array(text_, sa_);
        collect_intervals();
    }

    std::span<const interval> intervals() const noexcept { return intervals_; }
    std::span<const host_sequence> hosts() const noexcept { return hosts_; }

    std::vector<node_id> sequence_of(const interval& iv) const {
        const auto p = sa_[iv.lb];
        return {text_.begin() + p, text_.begin() + p + iv.length};
    }

    repeat_candidate candidate_of(const interval& iv) const {
        return {sequence_of(iv), iv.count(), iv.saved_cost()};
    }

    // Overlapping occurrence count of `seq` anywhere in the indexed hosts.
    std::size_t count_overlapping(std::span<const node_id> seq) const {
        auto [lo, hi] = find_range(seq);
        return static_cast<std::size_t>(hi - lo);
    }

    std::vector<occurrence_list> nonoverlapping_occurrences(const interval& iv) const {
        std::vector<std::int32_t> pos(sa_.begin() + iv.lb, sa_.begin() + iv.rb + 1);
        return greedy_ltr(std::move(pos), static_cast<std::size_t>(iv.length));
    }

    // Left-to-right greedy per host: accept an occurrence iff it starts after
    // the end of the previously accepted one.
    std::vector<occurrence_list> nonoverlapping_occurrences(std::span<const node_id> seq) const {
        if (seq.empty()) {
            return {};
        }
        auto [lo, hi] = find_range(seq);
        std::vector<std::int32_t> pos(sa_.begin() + lo, sa_.begin() + hi);
        return greedy_ltr(std::move(pos), seq.size());
    }

private:
    std::pair<std::int32_t, std::int32_t> find_range(std::span<const node_id> seq) const {
        const auto n = static_cast<std::int32_t>(text_.size());
        // Three-way compare of the suffix at p against seq (prefix match == 0).
        auto cmp = [&](std::int32_t p) {
            for (std::size_t i = 0; i < seq.size(); ++i) {
                if (p + static_cast<std::int32_t>(i) >= n) {
                    return -1;
                }
                const auto a = static_cast<std::int64_t>(text_[p + i]);
                const auto b = static_cast<std::int64_t>(seq[i]);
                if (a != b) {
                    return a < b ? -1 : 1;
                }
            }
            return 0;
        };
        auto lo = std::partition_point(sa_.begin(), sa_.end(), [&](std::int32_t p) { return cmp(p) < 0; });
        auto hi = std::partition_point(lo, sa_.end(), [&](std::int32_t p) { return cmp(p) == 0; });
        return {static_cast<std::int32_t>(lo - sa_.begin()), static_cast<std::int32_t>(hi - sa_.begin())};
    }

    std::vector<occurrence_list> greedy_ltr(std::vector<std::int32_t> pos, std::size_t len) const {
        std::sort(pos.begin(), pos.end());
        std::vector<occurrence_list> out;
        std::int32_t current = -1;
        std::int64_t next_free = -1;
        for (auto p : pos) {
            const auto k = owner_[p];
            if (k != current) {
                current = k;
                next_free = -1;
                out.push_back({hosts_[k].host, {}});
            }
            if (p >= next_free) {
                out.back().positions.push_back(static_cast<std::size_t>(p - starts_[k] + 1));
                next_free = static_cast<std::int64_t>(p) + static_cast<std::int64_t>(len);
            }
        }
        return out;
    }

    void collect_intervals() {
        const auto n = static_cast<std::int32_t>(text_.size());
        struct frame {
            std::int32_t lcp;
            std::int32_t lb;
        };
        std::vector<frame> stack{{0, 0}};
        for (std::int32_t i = 1; i <= n; ++i) {
            const auto cur = i < n ? lcp_[i] : 0;
            auto lb = i - 1;
            while (cur < stack.back().lcp) {
                const auto top = stack.back();
                stack.pop_back();
                if (top.lcp >= 2) {
                    intervals_.push_back({top.lb, i - 1, top.lcp});
                }
                lb = top.lb;
            }
            if (cur > stack.back().lcp) {
                stack.push_back({cur, lb});
            }
        }
    }

    std::vector<host_sequence> hosts_;
    std::vector<std::int32_t> text_;
    std::vector<std::int32_t> owner_;
    std::vector<std::int32_t> starts_;
    std::vector<std::int32_t> sa_;
    std::vector<std::int32_t> lcp_;
    std::vector<interval> intervals_;
};

// Candidate orderings. Ties on the primary key go to the longer repeat, then
// to the lexicographically smaller node sequence (= smaller suffix-array bound).
enum class candidate_rank { saved_cost, longest };

class candidate_queue {
public:
    candidate_queue(const repeat_index& index, candidate_rank rank) : rank_(rank) {
        const auto ivs = index.intervals();
        heap_.assign(ivs.begin(), ivs.end());
        std::make_heap(heap_.begin(), heap_.end(), less());
    }

    std::optional<repeat_index::interval> pop() {
        if (heap_.empty()) {
            return std::nullopt;
        }
        std::pop_heap(heap_.begin(), heap_.end(), less());
        auto top = heap_.back();
        heap_.pop_back();
        return top;
    }

    bool empty() const noexcept { return heap_.empty(); }

private:
    // Heap comparator: true when a ranks below b.
    struct ranks_below {
        candidate_rank rank;

        bool operator()(const repeat_index::interval& a, const repeat_index::interval& b) const {
            if (rank == candidate_rank::saved_cost && a.saved_cost() != b.saved_cost()) {
                return a.saved_cost() < b.saved_cost();
            }
            if (a.length != b.length) {
                return a.length < b.length;
            }
            return a.lb > b.lb;
        }
    };

    ranks_below less() const { return {rank_}; }

    candidate_rank rank_;
    std::vector<repeat_index::interval> heap_;
};

inline repeat_index build_index(std::vector<host_sequence> sequences) { return repeat_index(std::move(sequences)); }

// Highest SavedCost right-maximal repeat (overlapping counts), or nullopt when
// nothing repeats with length >= 2.
inline std::optional<repeat_candidate> best_candidate(const repeat_index& index) {
    candidate_queue q(index, candidate_rank::saved_cost);
    auto top = q.pop();
    if (!top || top->saved_cost() < 1) {
        return std::nullopt;
    }
    return index.candidate_of(*top);
}

inline std::vector<occurrence_list> nonoverlapping_occurrences(const repeat_index& index,
                                                               std::span<const node_id> seq) {
    return index.nonoverlapping_occurrences(seq);
}

} // namespace lexis
