#pragma once

#include <map>
#include <sstream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "lexis/dag.hpp"
#include "lexis/error.hpp"

namespace lexis {

using ordered_json = nlohmann::ordered_json;

namespace detail {

inline symbol_string parse_label(const alphabet& abc, split_mode mode, std::string_view text) {
    symbol_string out;
    auto push = [&](std::string_view unit) {
        auto id = abc.find(unit);
        if (!id) {
            throw error(error_kind::parse_error, "unknown symbol '" + std::string(unit) + "'");
        }
        out.push_back(*id);
    };
    if (mode == split_mode::chars) {
        for (auto u : utf8_units(text)) {
            push(u);
        }
    } else {
        for (const auto& tok : split_whitespace(text)) {
            push(tok);
        }
    }
    return out;
}

inline std::string dot_escape(std::string_view s) {
    std::string out;
    for (char ch : s) {
        if (ch == '"' || ch == '\\') {
            out += '\\';
        }
        out += ch;
    }
    return out;
}

} // namespace detail

inline ordered_json to_json_value(const lexis_dag& dag) {
    ordered_json j;
    j["mode"] = dag.mode() == split_mode::chars ? "char" : "token";
    j["alphabet"] = dag.alphabet().labels();
    auto nodes = ordered_json::array();
    for (node_id v = 0; v < dag.size(); ++v) {
        if (!dag.contains(v)) {
            continue;
        }
        ordered_json n;
        n["id"] = v;
        n["kind"] = to_string(dag.kind(v));
        n["string"] = dag.label(v);
        nodes.push_back(std::move(n));
    }
    j["nodes"] = std::move(nodes);
    auto edges = ordered_json::array();
    for (const auto& e : dag.edges()) {
        edges.push_back({e.from, e.to, e.index});
    }
    j["edges"] = std::move(edges);
    return j;
}

inline std::string to_json(const lexis_dag& dag) { return to_json_value(dag).dump(1) + "\n"; }

inline lexis_dag from_json(std::string_view text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw error(error_kind::parse_error, "byte " + std::to_string(e.byte) + ": " + e.what());
    }
    try {
        const auto mode_s = j.value("mode", std::string("char"));
        if (mode_s != "char" && mode_s != "token") {
            throw error(error_kind::parse_error, "mode must be 'char' or 'token'");
        }
        const auto mode = mode_s == "char" ? split_mode::chars : split_mode::tokens;
        alphabet abc;
        for (const auto& label : j.at("alphabet")) {
            const auto s = label.get<std::string>();
            if (abc.find(s)) {
                throw error(error_kind::parse_error, "duplicate alphabet label '" + s + "'");
            }
            abc.intern(s);
        }

        std::map<node_id, std::pair<node_kind, symbol_string>> nodes;
        for (const auto& n : j.at("nodes")) {
            const auto id = n.at("id").get<node_id>();
            const auto k = n.at("kind").get<std::string>();
            node_kind kind;
            if (k == "source") {
                kind = node_kind::source;
            } else if (k == "intermediate") {
                kind = node_kind::intermediate;
            } else if (k == "target") {
                kind = node_kind::target;
            } else {
                throw error(error_kind::parse_error, "node " + std::to_string(id) + ": unknown kind '" + k + "'");
            }
            auto str = detail::parse_label(abc, mode, n.at("string").get<std::string>());
            if (!nodes.emplace(id, std::make_pair(kind, std::move(str))).second) {
                throw error(error_kind::parse_error, "duplicate node id " + std::to_string(id));
            }
        }

        lexis_dag dag(std::move(abc), mode);
        for (const auto& [id, payload] : nodes) {
            while (dag.size() < id) {
                dag.add_tombstone();
            }
            dag.add_node(payload.first, payload.second);
        }
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 3) {
                throw error(error_kind::parse_error, "edge must be [from, to, index]");
            }
            const auto from = e[0].get<node_id>();
            const auto to = e[1].get<node_id>();
            const auto index = e[2].get<std::size_t>();
            if (!dag.contains(from) || !dag.contains(to)) {
                throw error(error_kind::parse_error, "edge references unknown node");
            }
            dag.add_edge(from, to, index);
        }
        require_valid(dag);
        return dag;
    } catch (const nlohmann::json::exception& e) {
        throw error(error_kind::parse_error, e.what());
    }
}

// Graphviz rendering: nodes labelled with their strings, edges with indices.
inline std::string to_dot(const lexis_dag& dag) {
    std::ostringstream out;
    out << "digraph lexis {\n  rankdir=BT;\n";
    for (node_id v = 0; v < dag.size(); ++v) {
        if (!dag.contains(v)) {
            continue;
        }
        const char* shape = "ellipse";
        if (dag.kind(v) == node_kind::source) {
            shape = "plaintext";
        } else if (dag.kind(v) == node_kind::target) {
            shape = "box";
        }
        out << "  n" << v << " [label=\"" << detail::dot_escape(dag.label(v)) << "\", shape=" << shape << "];\n";
    }
    for (const auto& e : dag.edges()) {
        out << "  n" << e.from << " -> n" << e.to << " [label=\"" << e.index << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace lexis
