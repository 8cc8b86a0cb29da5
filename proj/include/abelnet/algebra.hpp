#pragma once

#include "abelnet/core.hpp"
#include "abelnet/linalg.hpp"

#include <map>
#include <queue>

namespace abelnet {

namespace detail {

using Map = std::vector<State>;

inline Map compose(const Map& f, const Map& g) {  // f after g
    Map h(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) h[i] = f[g[i]];
    return h;
}

inline Map letter_map(const Processor& p, std::size_t i) {
    Map m(p.num_states());
    for (State q = 0; q < p.num_states(); ++q) m[q] = p.next[q][i];
    return m;
}

inline Map power(Map f, std::size_t k) {
    Map r(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) r[i] = i;
    while (k) {
        if (k & 1) r = compose(f, r);
        f = compose(f, f);
        k >>= 1;
    }
    return r;
}

// Product of all letter maps of one processor.
inline Map all_letters_map(const Processor& p) {
    Map g(p.num_states());
    for (State q = 0; q < p.num_states(); ++q) g[q] = q;
    for (std::size_t i = 0; i < p.letters.size(); ++i) g = compose(letter_map(p, i), g);
    return g;
}

} // namespace detail

// k*1 with t_{2k*1} = t_{k*1}; such an idempotent is the minimal one.
inline FiringVector idempotent_vector(const Network& net) {
    std::vector<detail::Map> g;
    for (const auto& p : net.processors) g.push_back(detail::all_letters_map(p));
    for (std::size_t k = 1;; ++k) {
        bool ok = true;
        for (const auto& m : g)
            if (detail::power(m, 2 * k) != detail::power(m, k)) {
                ok = false;
                break;
            }
        if (ok) return FiringVector(net.num_letters(), static_cast<std::int64_t>(k));
    }
}

// Per vertex, the sorted image e Q_v.
inline std::vector<std::vector<State>> locally_recurrent_states(const Network& net) {
    auto k = static_cast<std::size_t>(idempotent_vector(net)[0]);
    std::vector<std::vector<State>> loc;
    for (const auto& p : net.processors) {
        auto e = detail::power(detail::all_letters_map(p), k);
        std::vector<State> img(e.begin(), e.end());
        std::sort(img.begin(), img.end());
        img.erase(std::unique(img.begin(), img.end()), img.end());
        loc.push_back(std::move(img));
    }
    return loc;
}

// Restricted action of one processor on its locally recurrent states.
struct LocalGroup {
    std::vector<State> states;                    // e Q_v
    std::map<State, std::size_t> index;
    std::vector<detail::Map> perm;                // per local letter, on indices
    std::vector<detail::Map> inv;                 // inverse permutations
    std::vector<std::int64_t> order;              // order of each letter
    std::vector<Vec> path;                        // local exponent vector reaching each state from states[0]
    bool transitive = false;

    bool contains(State q) const { return index.count(q) != 0; }
};

inline std::vector<LocalGroup> local_groups(const Network& net) {
    auto loc = locally_recurrent_states(net);
    std::vector<LocalGroup> out;
    for (std::size_t v = 0; v < net.num_vertices(); ++v) {
        const auto& p = net.processors[v];
        LocalGroup G;
        G.states = loc[v];
        for (std::size_t i = 0; i < G.states.size(); ++i) G.index[G.states[i]] = i;
        std::size_t n = G.states.size(), k = p.letters.size();
        for (std::size_t a = 0; a < k; ++a) {
            detail::Map m(n), mi(n);
            for (std::size_t i = 0; i < n; ++i) {
                m[i] = G.index.at(p.next[G.states[i]][a]);
                mi[m[i]] = i;
            }
            std::int64_t ord = 1;
            for (auto cur = m; cur != detail::power(m, 0); cur = detail::compose(m, cur)) ++ord;
            G.perm.push_back(std::move(m));
            G.inv.push_back(std::move(mi));
            G.order.push_back(ord);
        }
        G.path.assign(n, Vec());
        G.path[0] = Vec(k, 0);
        std::queue<std::size_t> bfs;
        bfs.push(0);
        std::vector<char> seen(n, 0);
        seen[0] = 1;
        std::size_t reached = 1;
        while (!bfs.empty()) {
            auto i = bfs.front();
            bfs.pop();
            for (std::size_t a = 0; a < k; ++a) {
                auto j = G.perm[a][i];
                if (seen[j]) continue;
                seen[j] = 1;
                ++reached;
                G.path[j] = G.path[i];
                G.path[j][a] += 1;
                bfs.push(j);
            }
        }
        G.transitive = reached == n;
        out.push_back(std::move(G));
    }
    return out;
}

inline bool is_locally_irreducible(const Network& net) {
    auto gs = local_groups(net);
    return std::all_of(gs.begin(), gs.end(), [](const LocalGroup& g) { return g.transitive; });
}

inline bool is_locally_recurrent(const std::vector<LocalGroup>& gs, const TotalState& q) {
    for (std::size_t v = 0; v < gs.size(); ++v)
        if (!gs[v].contains(q[v])) return false;
    return true;
}

inline bool is_locally_recurrent(const Network& net, const TotalState& q) {
    return is_locally_recurrent(local_groups(net), q);
}

// All locally recurrent total states in lexicographic order.
inline std::vector<TotalState> enumerate_loc(const std::vector<LocalGroup>& gs) {
    std::vector<TotalState> out;
    TotalState q(gs.size());
    std::vector<std::size_t> idx(gs.size(), 0);
    while (true) {
        for (std::size_t v = 0; v < gs.size(); ++v) q[v] = gs[v].states[idx[v]];
        out.push_back(q);
        std::size_t v = gs.size();
        while (v > 0) {
            --v;
            if (++idx[v] < gs[v].states.size()) break;
            idx[v] = 0;
            if (v == 0) return out;
        }
        if (gs.empty()) return out;
    }
}

inline void require_irreducible(const std::vector<LocalGroup>& gs) {
    for (std::size_t v = 0; v < gs.size(); ++v)
        if (!gs[v].transitive)
            throw Error(Errc::NotLocallyIrreducible, "processor " + std::to_string(v) + " is not locally irreducible");
}

struct IntegerLattice {
    IntMatrix basis;  // columns

    BigInt index() const {
        BigInt d = determinant(basis);
        return d < 0 ? BigInt(-d) : d;
    }

    bool contains(const Vec& z) const {
        std::vector<BigInt> zz(z.begin(), z.end());
        return integer_coordinates(basis, zz).has_value();
    }
};

// K as a block-diagonal lattice, one block per vertex.
inline IntegerLattice total_kernel(const Network& net) {
    auto gs = local_groups(net);
    require_irreducible(gs);
    std::size_t n = net.num_letters();
    IntegerLattice K{IntMatrix(n, n)};
    for (std::size_t v = 0; v < gs.size(); ++v) {
        const auto& G = gs[v];
        const auto& letters = net.processors[v].letters;
        std::size_t k = letters.size();
        if (k == 0) continue;
        // Schreier relations path(i) + e_a - path(a(i)) generate the stabiliser
        std::vector<Vec> rel;
        for (std::size_t i = 0; i < G.states.size(); ++i)
            for (std::size_t a = 0; a < k; ++a) {
                Vec r = G.path[i];
                r[a] += 1;
                const auto& t = G.path[G.perm[a][i]];
                for (std::size_t c = 0; c < k; ++c) r[c] -= t[c];
                if (std::any_of(r.begin(), r.end(), [](std::int64_t e) { return e != 0; }))
                    rel.push_back(std::move(r));
            }
        IntMatrix gen(k, rel.size());
        for (std::size_t j = 0; j < rel.size(); ++j)
            for (std::size_t c = 0; c < k; ++c) gen(c, j) = rel[j][c];
        IntMatrix B = lattice_basis(gen);
        if (B.cols() != k) throw Error(Errc::NotLocallyIrreducible, "kernel of vertex action is not of full rank");
        for (std::size_t c = 0; c < k; ++c)
            for (std::size_t j = 0; j < k; ++j) K.basis(letters[c], letters[j]) = B(c, j);
    }
    return K;
}

// m_a: order of t_a on Loc.
inline Vec letter_orders(const Network& net, const std::vector<LocalGroup>& gs) {
    Vec m(net.num_letters());
    for (Letter a = 0; a < net.num_letters(); ++a) m[a] = gs[net.owner[a]].order[net.local[a]];
    return m;
}

inline TotalState base_loc_state(const std::vector<LocalGroup>& gs) {
    TotalState q;
    for (const auto& g : gs) q.push_back(g.states[0]);
    return q;
}

inline RatMatrix production_matrix(const Network& net) {
    auto gs = local_groups(net);
    require_irreducible(gs);
    auto m = letter_orders(net, gs);
    auto q = base_loc_state(gs);
    std::size_t n = net.num_letters();
    RatMatrix P(n, n);
    for (Letter a = 0; a < n; ++a) {
        FiringVector f(n, 0);
        f[a] = m[a];
        auto N = emitted_by(net, q, f);
        for (Letter b = 0; b < n; ++b) P(b, a) = Rational(N[b], m[a]);
    }
    return P;
}

enum class Criticality { Subcritical = 0, Critical = 1, Supercritical = 2 };

inline const char* criticality_name(Criticality c) {
    switch (c) {
    case Criticality::Subcritical: return "subcritical";
    case Criticality::Critical: return "critical";
    case Criticality::Supercritical: return "supercritical";
    }
    return "?";
}

struct NetworkClass {
    Criticality overall = Criticality::Subcritical;  // class of lambda(P), the max over components
    bool strongly_connected = false;
    std::vector<std::vector<Letter>> components;
    std::vector<Criticality> component_class;
};

// Strong components of the production digraph (a -> b when P(b,a) > 0),
// in order of their smallest letter.
inline std::vector<std::vector<Letter>> production_components(const RatMatrix& P) {
    std::size_t n = P.rows();
    std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
    for (std::size_t s = 0; s < n; ++s) {
        std::vector<std::size_t> stack{s};
        reach[s][s] = 1;
        while (!stack.empty()) {
            auto a = stack.back();
            stack.pop_back();
            for (std::size_t b = 0; b < n; ++b)
                if (P(b, a) > 0 && !reach[s][b]) {
                    reach[s][b] = 1;
                    stack.push_back(b);
                }
        }
    }
    std::vector<char> done(n, 0);
    std::vector<std::vector<Letter>> comps;
    for (std::size_t a = 0; a < n; ++a) {
        if (done[a]) continue;
        std::vector<Letter> c;
        for (std::size_t b = 0; b < n; ++b)
            if (reach[a][b] && reach[b][a]) {
                c.push_back(b);
                done[b] = 1;
            }
        comps.push_back(std::move(c));
    }
    return comps;
}

inline Criticality classify_block(const RatMatrix& P, const std::vector<Letter>& c) {
    std::size_t k = c.size();
    RatMatrix M(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) M(i, j) = (i == j ? Rational(1) : Rational(0)) - P(c[i], c[j]);
    auto ker = kernel(M);
    if (ker.size() == 1) {
        const auto& v = ker[0];
        bool pos = std::all_of(v.begin(), v.end(), [](const Rational& r) { return r > 0; });
        bool neg = std::all_of(v.begin(), v.end(), [](const Rational& r) { return r < 0; });
        if (pos || neg) return Criticality::Critical;
    }
    if (auto inv = inverse(M)) {
        bool nonneg = true;
        for (std::size_t i = 0; i < k && nonneg; ++i)
            for (std::size_t j = 0; j < k; ++j)
                if ((*inv)(i, j) < 0) {
                    nonneg = false;
                    break;
                }
        if (nonneg) return Criticality::Subcritical;
    }
    return Criticality::Supercritical;
}

inline NetworkClass classify(const RatMatrix& P) {
    NetworkClass nc;
    nc.components = production_components(P);
    nc.strongly_connected = nc.components.size() == 1;
    for (const auto& c : nc.components) {
        auto cls = classify_block(P, c);
        nc.component_class.push_back(cls);
        if (static_cast<int>(cls) > static_cast<int>(nc.overall)) nc.overall = cls;
    }
    return nc;
}

inline NetworkClass classify(const Network& net) { return classify(production_matrix(net)); }

namespace detail {

inline void require_critical_sc(const NetworkClass& nc) {
    if (!nc.strongly_connected) throw Error(Errc::NotStronglyConnected, "production digraph is not strongly connected");
    if (nc.overall != Criticality::Critical) throw Error(Errc::NotCritical, "network is not critical");
}

inline Vec positive_primitive(const RatVec& v) {
    auto p = primitive_integer(v);
    if (p[0] < 0)
        for (auto& e : p) e = -e;
    Vec out;
    for (auto& e : p) out.push_back(to_i64(e));
    return out;
}

} // namespace detail

inline Vec period_vector(const Network& net) {
    auto P = production_matrix(net);
    detail::require_critical_sc(classify(P));
    std::size_t n = net.num_letters();
    RatMatrix M = RatMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) M(i, j) -= P(i, j);
    auto r0 = detail::positive_primitive(kernel(M).at(0));
    // smallest k with k*r0 acting trivially on every e Q_v
    auto gs = local_groups(net);
    BigInt k = 1;
    for (std::size_t v = 0; v < gs.size(); ++v) {
        const auto& G = gs[v];
        detail::Map g(G.states.size());
        for (std::size_t i = 0; i < g.size(); ++i) g[i] = i;
        const auto& letters = net.processors[v].letters;
        for (std::size_t a = 0; a < letters.size(); ++a)
            g = detail::compose(detail::power(G.perm[a], static_cast<std::size_t>(r0[letters[a]])), g);
        std::int64_t ord = 1;
        for (auto cur = g; cur != detail::power(g, 0); cur = detail::compose(g, cur)) ++ord;
        k = big_lcm(k, ord);
    }
    for (auto& e : r0) e *= to_i64(k);
    return r0;
}

inline Vec exchange_rate(const Network& net) {
    auto P = production_matrix(net);
    auto nc = classify(P);
    if (!nc.strongly_connected) throw Error(Errc::NotStronglyConnected, "production digraph is not strongly connected");
    if (nc.overall != Criticality::Critical)
        throw Error(Errc::NotCritical, "exchange rate is only computed for critical networks");
    std::size_t n = net.num_letters();
    RatMatrix M = RatMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) M(i, j) -= P(j, i);
    return detail::positive_primitive(kernel(M).at(0));
}

struct GroupInvariants {
    std::size_t free_rank = 0;
    std::vector<BigInt> divisors;  // d_1 | d_2 | ..., all > 1

    BigInt torsion_order() const {
        BigInt o = 1;
        for (const auto& d : divisors) o *= d;
        return o;
    }

    // "Z3 x Z", "Z4 x Z4", "0"
    std::string to_string() const {
        std::vector<std::string> parts;
        for (const auto& d : divisors) parts.push_back("Z" + abelnet::to_string(d));
        for (std::size_t i = 0; i < free_rank; ++i) parts.push_back("Z");
        if (parts.empty()) return "0";
        std::string s = parts[0];
        for (std::size_t i = 1; i < parts.size(); ++i) s += " x " + parts[i];
        return s;
    }

    GroupInvariants torsion() const { return {0, divisors}; }
};

inline GroupInvariants cokernel_invariants(const IntMatrix& M) {
    auto f = smith_normal_form(M);
    GroupInvariants g;
    std::size_t rk = 0;
    for (const auto& d : f.diagonal()) {
        if (d == 0) continue;
        ++rk;
        if (d > 1) g.divisors.push_back(d);
    }
    g.free_rank = M.rows() - rk;
    return g;
}

namespace detail {

// Integer matrix (I - P) * basis(K).
inline IntMatrix image_of_kernel(const RatMatrix& P, const IntegerLattice& K) {
    std::size_t n = P.rows();
    IntMatrix M(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) {
            Rational s = 0;
            for (std::size_t l = 0; l < n; ++l) {
                Rational ip = (i == l ? Rational(1) : Rational(0)) - P(i, l);
                if (ip != 0) s += ip * Rational(K.basis(l, j));
            }
            if (!is_integer(s)) throw Error(Errc::PreconditionViolated, "(I-P)K is not integral");
            M(i, j) = numer(s);
        }
    return M;
}

} // namespace detail

inline GroupInvariants grothendieck_invariants(const Network& net) {
    auto P = production_matrix(net);
    return cokernel_invariants(detail::image_of_kernel(P, total_kernel(net)));
}

inline GroupInvariants torsion_group(const Network& net) {
    auto P = production_matrix(net);
    auto nc = classify(P);
    auto K = total_kernel(net);
    auto M = detail::image_of_kernel(P, K);
    if (!(nc.strongly_connected && nc.overall == Criticality::Critical))
        return cokernel_invariants(M).torsion();
    auto s = exchange_rate(net);
    std::size_t n = net.num_letters();
    IntMatrix row(1, n);
    for (std::size_t i = 0; i < n; ++i) row(0, i) = s[i];
    IntMatrix Z0 = integer_kernel(row);  // n x (n-1) basis of s^T z = 0
    IntMatrix C(Z0.cols(), n);
    for (std::size_t j = 0; j < n; ++j) {
        auto y = integer_coordinates(Z0, M.column(j));
        if (!y) throw Error(Errc::PreconditionViolated, "(I-P)K not inside Z^A_0");
        for (std::size_t i = 0; i < Z0.cols(); ++i) C(i, j) = (*y)[i];
    }
    return cokernel_invariants(C).torsion();
}

} // namespace abelnet
