#pragma once

#include "abelnet/zoo.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>

namespace abelnet {

using json = nlohmann::json;

namespace detail {

[[noreturn]] inline void field_error(const std::string& path, const std::string& msg) {
    throw Error(Errc::ParseError, path + ": " + msg);
}

inline const json& field(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) field_error(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) field_error(path, "missing field '" + key + "'");
    return *it;
}

inline const json& array_field(const json& j, const std::string& key, const std::string& path) {
    const auto& a = field(j, key, path);
    if (!a.is_array()) field_error(path + "." + key, "expected an array");
    return a;
}

inline std::int64_t as_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) field_error(path, "expected an integer");
    return j.get<std::int64_t>();
}

inline std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) field_error(path, "expected a string");
    return j.get<std::string>();
}

inline std::vector<std::int64_t> int_list(const json& j, const std::string& key, const std::string& path) {
    const auto& a = array_field(j, key, path);
    std::vector<std::int64_t> out;
    for (std::size_t i = 0; i < a.size(); ++i)
        out.push_back(as_int(a[i], path + "." + key + "[" + std::to_string(i) + "]"));
    return out;
}

inline Vertex vertex_ref(const Digraph& g, const json& j, const std::string& path) {
    auto name = as_string(j, path);
    for (Vertex v = 0; v < g.size(); ++v)
        if (g.name(v) == name) return v;
    field_error(path, "unknown vertex '" + name + "'");
}

inline Digraph parse_digraph(const json& j, const std::string& path) {
    std::vector<std::string> names;
    const auto& vs = array_field(j, "vertices", path);
    for (std::size_t i = 0; i < vs.size(); ++i) {
        auto name = as_string(vs[i], path + ".vertices[" + std::to_string(i) + "]");
        if (std::find(names.begin(), names.end(), name) != names.end())
            field_error(path + ".vertices[" + std::to_string(i) + "]", "duplicate vertex '" + name + "'");
        names.push_back(name);
    }
    Digraph g(names);
    const auto& es = array_field(j, "edges", path);
    for (std::size_t i = 0; i < es.size(); ++i) {
        auto p = path + ".edges[" + std::to_string(i) + "]";
        if (!es[i].is_array() || es[i].size() != 2) field_error(p, "expected [source, target]");
        g.add_edge(vertex_ref(g, es[i][0], p + "[0]"), vertex_ref(g, es[i][1], p + "[1]"));
    }
    return g;
}

// Inverse-network letters are named a_<vertex> and b_<vertex>.
inline Letter inverse_letter(const Digraph& g, const json& j, const std::string& path) {
    auto name = as_string(j, path);
    if (name.size() > 2 && (name[0] == 'a' || name[0] == 'b') && name[1] == '_') {
        auto rest = name.substr(2);
        for (Vertex v = 0; v < g.size(); ++v)
            if (g.name(v) == rest) return 2 * v + (name[0] == 'b' ? 1 : 0);
    }
    field_error(path, "unknown letter '" + name + "'");
}

inline Network parse_explicit(const Digraph& g, const json& j) {
    Network net;
    net.graph = g;
    const auto& procs = array_field(j, "processors", "$");
    if (procs.size() != g.size()) field_error("$.processors", "need one processor per vertex");
    // letters first, so emit tables can refer to any of them
    std::vector<std::vector<std::string>> local_names(g.size());
    for (std::size_t i = 0; i < procs.size(); ++i) {
        auto p = "$.processors[" + std::to_string(i) + "]";
        auto v = vertex_ref(g, field(procs[i], "vertex", p), p + ".vertex");
        if (v != i) field_error(p + ".vertex", "processors must be listed in vertex order");
        const auto& ls = array_field(procs[i], "letters", p);
        for (std::size_t k = 0; k < ls.size(); ++k) {
            auto name = as_string(ls[k], p + ".letters[" + std::to_string(k) + "]");
            if (std::find(net.letter_names.begin(), net.letter_names.end(), name) != net.letter_names.end())
                field_error(p + ".letters[" + std::to_string(k) + "]", "duplicate letter '" + name + "'");
            net.letter_names.push_back(name);
            local_names[i].push_back(name);
        }
    }
    auto letter_of = [&](const json& x, const std::string& path) {
        auto name = as_string(x, path);
        auto it = std::find(net.letter_names.begin(), net.letter_names.end(), name);
        if (it == net.letter_names.end()) field_error(path, "unknown letter '" + name + "'");
        return static_cast<Letter>(it - net.letter_names.begin());
    };
    Letter next_id = 0;
    for (std::size_t i = 0; i < procs.size(); ++i) {
        auto p = "$.processors[" + std::to_string(i) + "]";
        Processor proc;
        proc.vertex = i;
        for (std::size_t k = 0; k < local_names[i].size(); ++k) proc.letters.push_back(next_id++);
        const auto& ss = array_field(procs[i], "states", p);
        for (std::size_t s = 0; s < ss.size(); ++s)
            proc.state_names.push_back(as_string(ss[s], p + ".states[" + std::to_string(s) + "]"));
        auto state_of = [&](const json& x, const std::string& path) -> State {
            if (x.is_number_integer()) {
                auto k = x.get<std::int64_t>();
                if (k < 0 || static_cast<std::size_t>(k) >= ss.size()) field_error(path, "state index out of range");
                return static_cast<State>(k);
            }
            auto name = as_string(x, path);
            auto it = std::find(proc.state_names.begin(), proc.state_names.end(), name);
            if (it == proc.state_names.end()) field_error(path, "unknown state '" + name + "'");
            return static_cast<State>(it - proc.state_names.begin());
        };
        const auto& nt = array_field(procs[i], "next", p);
        const auto& et = array_field(procs[i], "emit", p);
        if (nt.size() != ss.size()) field_error(p + ".next", "need one row per state");
        if (et.size() != ss.size()) field_error(p + ".emit", "need one row per state");
        std::size_t width = proc.letters.size();
        for (std::size_t s = 0; s < ss.size(); ++s) {
            auto np = p + ".next[" + std::to_string(s) + "]";
            auto ep = p + ".emit[" + std::to_string(s) + "]";
            if (!nt[s].is_array() || nt[s].size() != width) field_error(np, "need one entry per letter");
            if (!et[s].is_array() || et[s].size() != width) field_error(ep, "need one entry per letter");
            std::vector<State> row;
            std::vector<Emission> erow;
            for (std::size_t k = 0; k < width; ++k) {
                row.push_back(state_of(nt[s][k], np + "[" + std::to_string(k) + "]"));
                auto cp = ep + "[" + std::to_string(k) + "]";
                if (!et[s][k].is_array()) field_error(cp, "expected a list of [letter, count]");
                Emission em;
                for (std::size_t t = 0; t < et[s][k].size(); ++t) {
                    auto tp = cp + "[" + std::to_string(t) + "]";
                    const auto& pair = et[s][k][t];
                    if (!pair.is_array() || pair.size() != 2) field_error(tp, "expected [letter, count]");
                    Letter b = letter_of(pair[0], tp + "[0]");
                    auto c = as_int(pair[1], tp + "[1]");
                    if (c <= 0) field_error(tp + "[1]", "count must be positive");
                    detail::add_to(em, b, c);
                }
                erow.push_back(std::move(em));
            }
            proc.next.push_back(std::move(row));
            proc.emit.push_back(std::move(erow));
        }
        net.processors.push_back(std::move(proc));
    }
    return net;
}

inline json digraph_json(const Digraph& g) {
    json j;
    j["vertices"] = g.names();
    json es = json::array();
    for (const auto& e : g.edges()) es.push_back({g.name(e.source), g.name(e.target)});
    j["edges"] = es;
    return j;
}

} // namespace detail

// Parse a network file into a spec. Syntax and field errors raise ParseError.
inline NetworkSpec parse_network(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(Errc::ParseError, e.what());
    }
    using namespace detail;
    NetworkSpec spec;
    auto kind = as_string(field(j, "kind", "$"), "$.kind");
    spec.graph = parse_digraph(field(j, "digraph", "$"), "$.digraph");
    const auto& g = spec.graph;
    if (kind == "explicit") {
        spec.family = Family::Explicit;
        spec.explicit_net = parse_explicit(g, j);
        return spec;
    }
    if (kind != "builtin") field_error("$.kind", "expected \"builtin\" or \"explicit\"");
    auto fam = as_string(field(j, "family", "$"), "$.family");
    static const json empty = json::object();
    const json& params = j.contains("params") ? j["params"] : empty;
    if (fam == "row_chip_firing") return row_chip_firing_spec(g);
    try {
        spec.family = family_from_name(fam);
    } catch (const Error&) {
        field_error("$.family", "unknown family '" + fam + "'");
    }
    switch (spec.family) {
    case Family::Toppling: spec.thresholds = int_list(params, "t", "$.params"); break;
    case Family::HeightArrow: spec.tau = int_list(params, "tau", "$.params"); break;
    case Family::HeightArrowSinked: {
        spec.tau = int_list(params, "tau", "$.params");
        const auto& s = array_field(params, "sinks", "$.params");
        for (std::size_t i = 0; i < s.size(); ++i)
            spec.sinks.push_back(vertex_ref(g, s[i], "$.params.sinks[" + std::to_string(i) + "]"));
        break;
    }
    case Family::Arithmetical:
        spec.D = int_list(params, "D", "$.params");
        spec.b = int_list(params, "b", "$.params");
        break;
    case Family::Inverse: {
        spec.inverse.m = int_list(params, "m", "$.params");
        const auto& c = array_field(params, "c", "$.params");
        const auto& d = array_field(params, "d", "$.params");
        const auto& x = array_field(params, "x", "$.params");
        for (std::size_t i = 0; i < c.size(); ++i)
            spec.inverse.c.push_back(inverse_letter(g, c[i], "$.params.c[" + std::to_string(i) + "]"));
        for (std::size_t i = 0; i < d.size(); ++i)
            spec.inverse.d.push_back(inverse_letter(g, d[i], "$.params.d[" + std::to_string(i) + "]"));
        for (std::size_t i = 0; i < x.size(); ++i) {
            auto p = "$.params.x[" + std::to_string(i) + "]";
            if (!x[i].is_array()) field_error(p, "expected an array of letters");
            std::vector<Letter> row;
            for (std::size_t k = 0; k < x[i].size(); ++k)
                row.push_back(inverse_letter(g, x[i][k], p + "[" + std::to_string(k) + "]"));
            spec.inverse.x.push_back(std::move(row));
        }
        break;
    }
    case Family::Explicit: field_error("$.family", "use kind \"explicit\" for explicit tables");
    default: break;
    }
    return spec;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::ParseError, "cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline NetworkSpec load_spec(const std::string& path) { return parse_network(read_file(path)); }

inline Network load_network(const std::string& path) { return build(load_spec(path)); }

// Explicit form: every table written out, state and letter names kept.
inline json to_json(const Network& net) {
    json j;
    j["kind"] = "explicit";
    j["digraph"] = detail::digraph_json(net.graph);
    json procs = json::array();
    for (const auto& p : net.processors) {
        json jp;
        jp["vertex"] = net.graph.name(p.vertex);
        json ls = json::array();
        for (Letter a : p.letters) ls.push_back(net.letter_names[a]);
        jp["letters"] = ls;
        jp["states"] = p.state_names;
        json nt = json::array(), et = json::array();
        for (State q = 0; q < p.num_states(); ++q) {
            json nrow = json::array(), erow = json::array();
            for (std::size_t k = 0; k < p.letters.size(); ++k) {
                nrow.push_back(p.state_names[p.next[q][k]]);
                json em = json::array();
                for (const auto& [b, c] : p.emit[q][k]) em.push_back({net.letter_names[b], c});
                erow.push_back(em);
            }
            nt.push_back(nrow);
            et.push_back(erow);
        }
        jp["next"] = nt;
        jp["emit"] = et;
        procs.push_back(jp);
    }
    j["processors"] = procs;
    return j;
}

inline json to_json(const NetworkSpec& spec) {
    if (spec.family == Family::Explicit) {
        if (!spec.explicit_net) throw Error(Errc::InvalidSpec, "explicit spec without tables");
        return to_json(*spec.explicit_net);
    }
    const auto& g = spec.graph;
    json j;
    j["kind"] = "builtin";
    j["family"] = family_name(spec.family);
    j["digraph"] = detail::digraph_json(g);
    json params = json::object();
    auto letter = [&](Letter a) { return std::string(a % 2 ? "b_" : "a_") + g.name(a / 2); };
    switch (spec.family) {
    case Family::Toppling: params["t"] = spec.thresholds; break;
    case Family::HeightArrow: params["tau"] = spec.tau; break;
    case Family::HeightArrowSinked: {
        params["tau"] = spec.tau;
        json s = json::array();
        for (auto v : spec.sinks) s.push_back(g.name(v));
        params["sinks"] = s;
        break;
    }
    case Family::Arithmetical:
        params["D"] = spec.D;
        params["b"] = spec.b;
        break;
    case Family::Inverse: {
        params["m"] = spec.inverse.m;
        json c = json::array(), d = json::array(), x = json::array();
        for (auto a : spec.inverse.c) c.push_back(letter(a));
        for (auto a : spec.inverse.d) d.push_back(letter(a));
        for (const auto& row : spec.inverse.x) {
            json r = json::array();
            for (auto a : row) r.push_back(letter(a));
            x.push_back(r);
        }
        params["c"] = c;
        params["d"] = d;
        params["x"] = x;
        break;
    }
    default: break;
    }
    j["params"] = params;
    return j;
}

inline std::string export_network(const Network& net) { return to_json(net).dump(2) + "\n"; }

} // namespace abelnet
