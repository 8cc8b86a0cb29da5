#pragma once

#include "abelnet/error.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace abelnet {

using Vertex = std::size_t;

struct Edge {
    std::size_t id;
    Vertex source;
    Vertex target;
};

// Multi-digraph. The position of an edge in out_edges(v) is its index in the
// cyclic order used by rotor-like processors.
class Digraph {
public:
    Digraph() = default;

    explicit Digraph(std::vector<std::string> names)
        : names_(std::move(names)), out_(names_.size()) {}

    static Digraph with_vertices(std::size_t n) {
        std::vector<std::string> names;
        for (std::size_t i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
        return Digraph(std::move(names));
    }

    std::size_t add_edge(Vertex s, Vertex t) {
        if (s >= size() || t >= size())
            throw Error(Errc::InvalidSpec, "edge endpoint out of range");
        std::size_t id = edges_.size();
        edges_.push_back({id, s, t});
        out_[s].push_back(id);
        return id;
    }

    std::size_t size() const { return names_.size(); }
    std::size_t num_edges() const { return edges_.size(); }
    const std::string& name(Vertex v) const { return names_[v]; }
    const std::vector<std::string>& names() const { return names_; }
    const Edge& edge(std::size_t id) const { return edges_[id]; }
    const std::vector<Edge>& edges() const { return edges_; }

    const std::vector<std::size_t>& out_edges(Vertex v) const { return out_[v]; }
    std::size_t outdeg(Vertex v) const { return out_[v].size(); }

    std::size_t indeg(Vertex v) const {
        return static_cast<std::size_t>(std::count_if(
            edges_.begin(), edges_.end(), [v](const Edge& e) { return e.target == v; }));
    }

    // Target of the i-th out-edge of v, i taken mod outdeg(v).
    Vertex out_target(Vertex v, std::size_t i) const {
        return edges_[out_[v][i % out_[v].size()]].target;
    }

    std::size_t find(const std::string& name) const {
        auto it = std::find(names_.begin(), names_.end(), name);
        if (it == names_.end()) throw Error(Errc::InvalidSpec, "unknown vertex '" + name + "'");
        return static_cast<std::size_t>(it - names_.begin());
    }

    // A(v, w) = number of edges w -> v.
    std::vector<std::vector<std::int64_t>> adjacency() const {
        std::vector<std::vector<std::int64_t>> a(size(), std::vector<std::int64_t>(size(), 0));
        for (const auto& e : edges_) a[e.target][e.source] += 1;
        return a;
    }

    bool strongly_connected() const {
        if (size() == 0) return true;
        auto reach = [this](bool forward) {
            std::vector<char> seen(size(), 0);
            std::vector<Vertex> stack{0};
            seen[0] = 1;
            while (!stack.empty()) {
                Vertex v = stack.back();
                stack.pop_back();
                for (const auto& e : edges_) {
                    Vertex from = forward ? e.source : e.target;
                    Vertex to = forward ? e.target : e.source;
                    if (from == v && !seen[to]) {
                        seen[to] = 1;
                        stack.push_back(to);
                    }
                }
            }
            return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
        };
        return reach(true) && reach(false);
    }

    bool operator==(const Digraph& o) const {
        if (names_ != o.names_ || out_ != o.out_ || edges_.size() != o.edges_.size()) return false;
        for (std::size_t i = 0; i < edges_.size(); ++i)
            if (edges_[i].source != o.edges_[i].source || edges_[i].target != o.edges_[i].target)
                return false;
        return true;
    }

private:
    std::vector<std::string> names_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::size_t>> out_;
};

// Bidirected cycle C_n; v_k has out-edges (v_k, v_{k+1}) then (v_k, v_{k-1}).
inline Digraph bidirected_cycle(std::size_t n) {
    Digraph g = Digraph::with_vertices(n);
    for (std::size_t k = 0; k < n; ++k) {
        g.add_edge(k, (k + 1) % n);
        g.add_edge(k, (k + n - 1) % n);
    }
    return g;
}

inline Digraph complete_digraph(std::size_t n) {
    Digraph g = Digraph::with_vertices(n);
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t i = 1; i < n; ++i) g.add_edge(v, (v + i) % n);
    return g;
}

} // namespace abelnet
