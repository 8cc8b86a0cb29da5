#pragma once

#include "abelnet/linalg.hpp"
#include "abelnet/network.hpp"

#include <map>
#include <optional>
#include <set>

namespace abelnet {

enum class Family {
    Rotor,
    Sandpile,
    HeightArrow,
    HeightArrowSinked,
    Toppling,
    Arithmetical,
    BranchingRotor,
    Inverse,
    Explicit,
};

inline const char* family_name(Family f) {
    switch (f) {
    case Family::Rotor: return "rotor";
    case Family::Sandpile: return "sandpile";
    case Family::HeightArrow: return "height_arrow";
    case Family::HeightArrowSinked: return "height_arrow_sinked";
    case Family::Toppling: return "toppling";
    case Family::Arithmetical: return "arithmetical";
    case Family::BranchingRotor: return "branching_rotor";
    case Family::Inverse: return "inverse";
    case Family::Explicit: return "explicit";
    }
    return "?";
}

inline Family family_from_name(const std::string& s) {
    for (auto f : {Family::Rotor, Family::Sandpile, Family::HeightArrow, Family::HeightArrowSinked,
                   Family::Toppling, Family::Arithmetical, Family::BranchingRotor, Family::Inverse,
                   Family::Explicit})
        if (s == family_name(f)) return f;
    throw Error(Errc::InvalidSpec, "unknown family '" + s + "'");
}

struct InverseParams {
    std::vector<std::int64_t> m;              // period per vertex
    std::vector<Letter> c, d;                 // the two output letters per vertex
    std::vector<std::vector<Letter>> x;       // x_i per vertex, each c_v or d_v
};

struct NetworkSpec {
    Family family = Family::Rotor;
    Digraph graph;
    std::vector<std::int64_t> tau;          // height-arrow thresholds
    std::vector<Vertex> sinks;              // height_arrow_sinked
    std::vector<std::int64_t> thresholds;   // toppling t_v
    std::vector<std::int64_t> D, b;         // arithmetical
    InverseParams inverse;
    std::optional<Network> explicit_net;
};

namespace detail {

inline Network unary_shell(const Digraph& g) {
    Network net;
    net.graph = g;
    net.letter_names = g.names();
    for (Vertex v = 0; v < g.size(); ++v) {
        Processor p;
        p.vertex = v;
        p.letters = {v};
        net.processors.push_back(std::move(p));
    }
    return net;
}

inline void add_to(Emission& em, Letter b, std::int64_t c = 1) {
    for (auto& [l, k] : em)
        if (l == b) {
            k += c;
            return;
        }
    em.emplace_back(b, c);
}

inline void require_outdeg(const Digraph& g) {
    for (Vertex v = 0; v < g.size(); ++v)
        if (g.outdeg(v) == 0)
            throw Error(Errc::InvalidSpec, "vertex " + g.name(v) + " has no out-edges");
}

// Q_v = Z_t; the t-th processed letter fires one letter along each out-edge,
// skipping targets listed in `drop`.
inline Network threshold_network(const Digraph& g, const std::vector<std::int64_t>& t) {
    require_outdeg(g);
    if (t.size() != g.size()) throw Error(Errc::InvalidSpec, "one threshold per vertex required");
    Network net = unary_shell(g);
    for (Vertex v = 0; v < g.size(); ++v) {
        if (t[v] < 1) throw Error(Errc::InvalidSpec, "thresholds must be positive");
        auto& p = net.processors[v];
        auto n = static_cast<std::size_t>(t[v]);
        p.next.assign(n, {0});
        p.emit.assign(n, {Emission{}});
        for (std::size_t i = 0; i < n; ++i) {
            p.state_names.push_back(std::to_string(i));
            p.next[i][0] = (i + 1) % n;
            if (i + 1 == n)
                for (auto e : g.out_edges(v)) add_to(p.emit[i][0], g.edge(e).target);
        }
    }
    finalize(net);
    return net;
}

inline Network height_arrow_impl(const Digraph& g, const std::vector<std::int64_t>& tau,
                                 const std::set<Vertex>& sinks) {
    require_outdeg(g);
    if (tau.size() != g.size()) throw Error(Errc::InvalidSpec, "one tau per vertex required");
    Network net = unary_shell(g);
    for (Vertex v = 0; v < g.size(); ++v) {
        auto deg = g.outdeg(v);
        if (tau[v] < 1 || static_cast<std::size_t>(tau[v]) > deg)
            throw Error(Errc::InvalidSpec, "tau out of range at " + g.name(v));
        auto t = static_cast<std::size_t>(tau[v]);
        // arrows reachable from 0: d = k*tau mod deg
        std::vector<std::size_t> arrows;
        for (std::size_t d = 0;;) {
            arrows.push_back(d);
            d = (d + t) % deg;
            if (d == 0) break;
        }
        auto& p = net.processors[v];
        std::size_t n = arrows.size() * t;
        p.next.assign(n, {0});
        p.emit.assign(n, {Emission{}});
        for (std::size_t k = 0; k < arrows.size(); ++k)
            for (std::size_t c = 0; c < t; ++c) {
                std::size_t s = k * t + c;
                p.state_names.push_back(std::to_string(arrows[k]) + ":" + std::to_string(c));
                if (c + 1 < t) {
                    p.next[s][0] = s + 1;
                } else {
                    p.next[s][0] = ((k + 1) % arrows.size()) * t;
                    for (std::size_t j = 1; j <= t; ++j) {
                        Vertex u = g.out_target(v, arrows[k] + j);
                        if (!sinks.count(u)) add_to(p.emit[s][0], u);
                    }
                }
            }
    }
    finalize(net);
    return net;
}

} // namespace detail

inline Network rotor_network(const Digraph& g) {
    detail::require_outdeg(g);
    Network net = detail::unary_shell(g);
    for (Vertex v = 0; v < g.size(); ++v) {
        auto& p = net.processors[v];
        auto deg = g.outdeg(v);
        p.next.assign(deg, {0});
        p.emit.assign(deg, {Emission{}});
        for (std::size_t i = 0; i < deg; ++i) {
            const auto& e = g.edge(g.out_edges(v)[i]);
            p.state_names.push_back(g.name(e.source) + ">" + g.name(e.target));
            p.next[i][0] = (i + 1) % deg;
            p.emit[i][0].emplace_back(g.out_target(v, i + 1), 1);
        }
    }
    finalize(net);
    return net;
}

inline Network sandpile_network(const Digraph& g) {
    std::vector<std::int64_t> t;
    for (Vertex v = 0; v < g.size(); ++v) t.push_back(static_cast<std::int64_t>(g.outdeg(v)));
    return detail::threshold_network(g, t);
}

inline Network toppling_network(const Digraph& g, const std::vector<std::int64_t>& t) {
    return detail::threshold_network(g, t);
}

inline Network height_arrow_network(const Digraph& g, const std::vector<std::int64_t>& tau) {
    return detail::height_arrow_impl(g, tau, {});
}

inline Network height_arrow_sinked_network(const Digraph& g, const std::vector<std::int64_t>& tau,
                                           const std::vector<Vertex>& sinks) {
    if (sinks.empty()) throw Error(Errc::InvalidSpec, "sink set must be nonempty");
    for (auto s : sinks)
        if (s >= g.size()) throw Error(Errc::InvalidSpec, "sink out of range");
    return detail::height_arrow_impl(g, tau, std::set<Vertex>(sinks.begin(), sinks.end()));
}

inline void check_arithmetical(const Digraph& g, const std::vector<std::int64_t>& D,
                               const std::vector<std::int64_t>& b) {
    std::size_t n = g.size();
    if (D.size() != n || b.size() != n) throw Error(Errc::InvalidSpec, "D and b need one entry per vertex");
    BigInt gcd = 0;
    for (std::size_t v = 0; v < n; ++v) {
        if (D[v] <= 0) throw Error(Errc::InvalidSpec, "D must be positive");
        if (b[v] <= 0) throw Error(Errc::InvalidSpec, "b must be positive");
        gcd = big_gcd(gcd, b[v]);
    }
    if (gcd != 1) throw Error(Errc::InvalidSpec, "gcd of b must be 1");
    auto A = g.adjacency();
    for (std::size_t v = 0; v < n; ++v) {
        std::int64_t row = D[v] * b[v];
        for (std::size_t w = 0; w < n; ++w) row -= A[v][w] * b[w];
        if (row != 0) throw Error(Errc::InvalidSpec, "(D - A_G) b != 0 at " + g.name(v));
    }
}

inline Network arithmetical_network(const Digraph& g, const std::vector<std::int64_t>& D,
                                    const std::vector<std::int64_t>& b) {
    check_arithmetical(g, D, b);
    return detail::threshold_network(g, D);
}

// D = indegree matrix; b is the primitive positive kernel vector of D - A_G.
inline NetworkSpec row_chip_firing_spec(const Digraph& g) {
    std::size_t n = g.size();
    NetworkSpec spec;
    spec.family = Family::Arithmetical;
    spec.graph = g;
    auto A = g.adjacency();
    RatMatrix M(n, n);
    for (std::size_t v = 0; v < n; ++v) {
        spec.D.push_back(static_cast<std::int64_t>(g.indeg(v)));
        for (std::size_t w = 0; w < n; ++w) M(v, w) = Rational(-A[v][w]);
        M(v, v) += spec.D[v];
    }
    auto ker = kernel(M);
    if (ker.size() != 1) throw Error(Errc::InvalidSpec, "indegree matrix does not give an arithmetical structure");
    auto bb = primitive_integer(ker[0]);
    if (bb[0] < 0)
        for (auto& e : bb) e = -e;
    for (auto& e : bb) spec.b.push_back(to_i64(e));
    return spec;
}

inline Network branching_rotor_network(const Digraph& g) {
    detail::require_outdeg(g);
    Network net = detail::unary_shell(g);
    for (Vertex v = 0; v < g.size(); ++v) {
        auto deg = g.outdeg(v);
        std::vector<std::size_t> idx;  // edge index 2i mod deg of each state
        for (std::size_t e = 0;;) {
            idx.push_back(e);
            e = (e + 2) % deg;
            if (e == 0) break;
        }
        auto& p = net.processors[v];
        std::size_t n = idx.size();
        p.next.assign(n, {0});
        p.emit.assign(n, {Emission{}});
        for (std::size_t s = 0; s < n; ++s) {
            p.state_names.push_back("e" + std::to_string(idx[s]));
            p.next[s][0] = (s + 1) % n;
            detail::add_to(p.emit[s][0], g.out_target(v, idx[s] + 1));
            detail::add_to(p.emit[s][0], g.out_target(v, idx[s] + 2));
        }
    }
    finalize(net);
    return net;
}

// Letters a_v = 2v, b_v = 2v+1.
inline Network inverse_network(const Digraph& g, const InverseParams& ip) {
    std::size_t n = g.size();
    if (ip.m.size() != n || ip.c.size() != n || ip.d.size() != n || ip.x.size() != n)
        throw Error(Errc::InvalidSpec, "inverse parameters need one entry per vertex");
    Network net;
    net.graph = g;
    for (Vertex v = 0; v < n; ++v) {
        net.letter_names.push_back("a_" + g.name(v));
        net.letter_names.push_back("b_" + g.name(v));
    }
    for (Vertex v = 0; v < n; ++v) {
        if (ip.m[v] < 1) throw Error(Errc::InvalidSpec, "periods must be positive");
        auto m = static_cast<std::size_t>(ip.m[v]);
        Letter c = ip.c[v], d = ip.d[v];
        if (c == d || c >= 2 * n || d >= 2 * n) throw Error(Errc::InvalidSpec, "c_v, d_v must be distinct letters");
        if (ip.x[v].size() != m) throw Error(Errc::InvalidSpec, "x table length must equal m_v");
        for (Letter l : ip.x[v])
            if (l != c && l != d) throw Error(Errc::InvalidSpec, "x_i must be c_v or d_v");
        Processor p;
        p.vertex = v;
        p.letters = {2 * v, 2 * v + 1};
        p.next.assign(m, {0, 0});
        p.emit.assign(m, {Emission{}, Emission{}});
        auto star = [&](Letter l) { return l == c ? d : c; };
        for (std::size_t i = 0; i < m; ++i) {
            p.state_names.push_back(std::to_string(i));
            p.next[i][0] = (i + 1) % m;
            p.next[i][1] = (i + m - 1) % m;
            p.emit[i][0].emplace_back(ip.x[v][i], 1);
            p.emit[i][1].emplace_back(star(ip.x[v][(i + m - 1) % m]), 1);
        }
        net.processors.push_back(std::move(p));
    }
    finalize(net);
    return net;
}

inline Network build(const NetworkSpec& spec) {
    const auto& g = spec.graph;
    switch (spec.family) {
    case Family::Rotor: return rotor_network(g);
    case Family::Sandpile: return sandpile_network(g);
    case Family::HeightArrow: return height_arrow_network(g, spec.tau);
    case Family::HeightArrowSinked: return height_arrow_sinked_network(g, spec.tau, spec.sinks);
    case Family::Toppling: return toppling_network(g, spec.thresholds);
    case Family::Arithmetical: return arithmetical_network(g, spec.D, spec.b);
    case Family::BranchingRotor: return branching_rotor_network(g);
    case Family::Inverse: return inverse_network(g, spec.inverse);
    case Family::Explicit: {
        if (!spec.explicit_net) throw Error(Errc::InvalidSpec, "explicit spec without tables");
        Network net = *spec.explicit_net;
        finalize(net);
        return net;
    }
    }
    throw Error(Errc::InvalidSpec, "unhandled family");
}

struct Violation {
    enum Kind { Transition, Message, NonNeighbour } kind;
    Vertex vertex;
    State q;
    Letter a, b;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

inline ValidationReport validate_abelian(const Network& net) {
    ValidationReport rep;
    std::size_t nl = net.num_letters();
    for (Vertex v = 0; v < net.num_vertices(); ++v) {
        const auto& p = net.processors[v];
        std::size_t k = p.letters.size();
        for (State q = 0; q < p.num_states(); ++q) {
            for (std::size_t i = 0; i < k; ++i) {
                for (const auto& [b, c] : p.emit[q][i]) {
                    const auto& outs = net.graph.out_edges(v);
                    Vertex w = b < nl ? net.owner[b] : net.graph.size();
                    bool ok = std::any_of(outs.begin(), outs.end(),
                                          [&](std::size_t e) { return net.graph.edge(e).target == w; });
                    if (!ok) rep.violations.push_back({Violation::NonNeighbour, v, q, p.letters[i], b});
                }
                for (std::size_t j = i + 1; j < k; ++j) {
                    State qi = p.next[q][i], qj = p.next[q][j];
                    if (p.next[qi][j] != p.next[qj][i])
                        rep.violations.push_back({Violation::Transition, v, q, p.letters[i], p.letters[j]});
                    Vec lhs(nl, 0), rhs(nl, 0);
                    for (const auto& [b, c] : p.emit[q][i]) lhs[b] += c;
                    for (const auto& [b, c] : p.emit[qi][j]) lhs[b] += c;
                    for (const auto& [b, c] : p.emit[q][j]) rhs[b] += c;
                    for (const auto& [b, c] : p.emit[qj][i]) rhs[b] += c;
                    if (lhs != rhs)
                        rep.violations.push_back({Violation::Message, v, q, p.letters[i], p.letters[j]});
                }
            }
        }
    }
    return rep;
}

// Messages outside R are dropped.
inline Network thief(const Network& net, const std::vector<char>& in_R) {
    Network out = net;
    for (auto& p : out.processors)
        for (auto& row : p.emit)
            for (auto& em : row)
                em.erase(std::remove_if(em.begin(), em.end(),
                                        [&](const auto& e) { return !in_R[e.first]; }),
                         em.end());
    return out;
}

inline Network thief(const Network& net, const std::set<Letter>& R) {
    std::vector<char> in(net.num_letters(), 0);
    for (Letter a : R) {
        net.check_letter(a);
        in[a] = 1;
    }
    return thief(net, in);
}

} // namespace abelnet
