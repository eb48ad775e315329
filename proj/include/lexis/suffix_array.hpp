#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

namespace lexis {

namespace detail {

// SA-IS (Nong, Zhang & Chan) over an integer text with values in [0, upper].
inline std::vector<std::int32_t> sa_is(std::span<const std::int32_t> s, std::int32_t upper) {
    const auto n = static_cast<std::int32_t>(s.size());
    if (n == 0) {
        return {};
    }
    if (n == 1) {
        return {0};
    }
    if (n == 2) {
        return s[0] < s[1] ? std::vector<std::int32_t>{0, 1} : std::vector<std::int32_t>{1, 0};
    }

    std::vector<std::int32_t> sa(n);
    std::vector<char> is_s(n, 0);
    for (std::int32_t i = n - 2; i >= 0; --i) {
        is_s[i] = s[i] == s[i + 1] ? is_s[i + 1] : (s[i] < s[i + 1]);
    }

    std::vector<std::int32_t> sum_l(upper + 1, 0), sum_s(upper + 1, 0);
    for (std::int32_t i = 0; i < n; ++i) {
        if (!is_s[i]) {
            ++sum_s[s[i]];
        } else {
            ++sum_l[s[i] + 1];
        }
    }
    for (std::int32_t i = 0; i <= upper; ++i) {
        sum_s[i] += sum_l[i];
        if (i < upper) {
            sum_l[i + 1] += sum_s[i];
        }
    }

    std::vector<std::int32_t> buf(upper + 1);
    auto induce = [&](const std::vector<std::int32_t>& lms) {
        std::fill(sa.begin(), sa.end(), -1);
        std::copy(sum_s.begin(), sum_s.end(), buf.begin());
        for (auto d : lms) {
            if (d != n) {
                sa[buf[s[d]]++] = d;
            }
        }
        std::copy(sum_l.begin(), sum_l.end(), buf.begin());
        sa[buf[s[n - 1]]++] = n - 1;
        for (std::int32_t i = 0; i < n; ++i) {
            const auto v = sa[i];
            if (v >= 1 && !is_s[v - 1]) {
                sa[buf[s[v - 1]]++] = v - 1;
            }
        }
        std::copy(sum_l.begin(), sum_l.end(), buf.begin());
        for (std::int32_t i = n - 1; i >= 0; --i) {
            const auto v = sa[i];
            if (v >= 1 && is_s[v - 1]) {
                sa[--buf[s[v - 1] + 1]] = v - 1;
            }
        }
    };

    std::vector<std::int32_t> lms_map(n + 1, -1);
    std::vector<std::int32_t> lms;
    for (std::int32_t i = 1; i < n; ++i) {
        if (!is_s[i - 1] && is_s[i]) {
            lms_map[i] = static_cast<std::int32_t>(lms.size());
            lms.push_back(i);
        }
    }
    const auto m = static_cast<std::int32_t>(lms.size());

    induce(lms);

    if (m > 0) {
        std::vector<std::int32_t> sorted_lms;
        sorted_lms.reserve(m);
        for (auto v : sa) {
            if (lms_map[v] != -1) {
                sorted_lms.push_back(v);
            }
        }
        std::vector<std::int32_t> rec(m);
        std::int32_t rec_upper = 0;
        rec[lms_map[sorted_lms[0]]] = 0;
        for (std::int32_t i = 1; i < m; ++i) {
            auto l = sorted_lms[i - 1];
            auto r = sorted_lms[i];
            const auto end_l = lms_map[l] + 1 < m ? lms[lms_map[l] + 1] : n;
            const auto end_r = lms_map[r] + 1 < m ? lms[lms_map[r] + 1] : n;
            bool same = true;
            if (end_l - l != end_r - r) {
                same = false;
            } else {
                while (l < end_l && s[l] == s[r]) {
                    ++l;
                    ++r;
                }
                if (l == n || s[l] != s[r]) {
                    same = false;
                }
            }
            if (!same) {
                ++rec_upper;
            }
            rec[lms_map[sorted_lms[i]]] = rec_upper;
        }
        const auto rec_sa = sa_is(rec, rec_upper);
        for (std::int32_t i = 0; i < m; ++i) {
            sorted_lms[i] = lms[rec_sa[i]];
        }
        induce(sorted_lms);
    }
    return sa;
}

} // namespace detail

// Suffix array of `text` (values in [0, upper]).
inline std::vector<std::int32_t> suffix_array(std::span<const std::int32_t> text, std::int32_t upper) {
    return detail::sa_is(text, upper);
}

// Kasai: lcp[i] = LCP(text[sa[i-1]..], text[sa[i]..]), lcp[0] = 0.
inline std::vector<std::int32_t> lcp_array(std::span<const std::int32_t> text, std::span<const std::int32_t> sa) {
    const auto n = static_cast<std::int32_t>(text.size());
    std::vector<std::int32_t> rank(n), lcp(n, 0);
    for (std::int32_t i = 0; i < n; ++i) {
        rank[sa[i]] = i;
    }
    std::int32_t h = 0;
    for (std::int32_t i = 0; i < n; ++i) {
        if (rank[i] == 0) {
            h = 0;
            continue;
        }
        const auto j = sa[rank[i] - 1];
        while (i + h < n && j + h < n && text[i + h] == text[j + h]) {
            ++h;
        }
        lcp[rank[i]] = h;
        if (h > 0) {
            --h;
        }
    }
    return lcp;
}

} // namespace lexis
