#pragma once

#include "abelnet/dynamics.hpp"
#include "abelnet/series.hpp"
#include "abelnet/zoo.hpp"

#include <thread>

namespace abelnet {

namespace detail {

// Run f(i) for i in [0, n) on up to `jobs` threads; f must only touch slot i.
template <class F>
void parallel_for(std::size_t n, unsigned jobs, F f) {
    if (jobs <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t)
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += jobs) f(i);
        });
    for (auto& th : pool) th.join();
}

// All exponent vectors of total degree <= maxdeg, graded order.
inline std::vector<Exponent> monomials(std::size_t nvars, int maxdeg) {
    std::vector<Exponent> out;
    Exponent e(nvars, 0);
    for (int d = 0; d <= maxdeg; ++d) {
        // compositions of d into nvars parts, lexicographic
        std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
            if (i + 1 == nvars) {
                e[i] = left;
                out.push_back(e);
                return;
            }
            for (int k = left; k >= 0; --k) {
                e[i] = k;
                rec(i + 1, left - k);
            }
        };
        if (nvars == 0) {
            if (d == 0) out.push_back(e);
            continue;
        }
        rec(0, d);
    }
    std::sort(out.begin(), out.end(), GradedLess{});
    return out;
}

inline void require_agent_sc(const Network& net) {
    if (!is_agent(net)) throw Error(Errc::NotAgentNetwork, "agent network required");
    if (!net.graph.strongly_connected()) throw Error(Errc::NotStronglyConnected, "strongly connected network required");
}

// det(diag(d) + C) = sum_S prod_{a in S} d_a * det(C; A \ S)
inline Series diagonal_series_determinant(const std::vector<Series>& d, const RatMatrix& C) {
    std::size_t n = d.size();
    Series total(d.empty() ? 0 : d[0].nvars(), d.empty() ? 0 : d[0].maxdeg());
    for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
        std::vector<std::size_t> rest;
        for (std::size_t i = 0; i < n; ++i)
            if (!(mask >> i & 1)) rest.push_back(i);
        RatMatrix minor(rest.size(), rest.size());
        for (std::size_t i = 0; i < rest.size(); ++i)
            for (std::size_t j = 0; j < rest.size(); ++j) minor(i, j) = C(rest[i], rest[j]);
        Rational m = rest.empty() ? Rational(1) : determinant(minor);
        if (m == 0) continue;
        Series term = Series::constant(total.nvars(), total.maxdeg(), m);
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1) term = term * d[i];
        total += term;
    }
    return total;
}

} // namespace detail

inline std::size_t count_recurrent_for_input(const CycleTester& test, const std::vector<TotalState>& loc, const Vec& n) {
    std::size_t count = 0;
    for (const auto& q : loc)
        if (test(Configuration{n, q})) ++count;
    return count;
}

// #{q : n.q recurrent}, by the cycle test over Loc.
inline std::size_t count_recurrent_for_input(const Network& net, const FiringVector& n) {
    detail::require_agent_sc(net);
    CycleTester test(net);
    return count_recurrent_for_input(test, enumerate_loc(test.groups()), n);
}

inline SeriesTable series_bruteforce(const Network& net, int maxdeg, unsigned jobs = 1) {
    detail::require_agent_sc(net);
    CycleTester test(net);
    auto loc = enumerate_loc(test.groups());
    auto mons = detail::monomials(net.num_letters(), maxdeg);
    std::vector<std::size_t> counts(mons.size());
    detail::parallel_for(mons.size(), jobs, [&](std::size_t i) {
        Vec n(mons[i].begin(), mons[i].end());
        counts[i] = count_recurrent_for_input(test, loc, n);
    });
    SeriesTable t;
    t.nvars = net.num_letters();
    t.maxdeg = maxdeg;
    for (std::size_t i = 0; i < mons.size(); ++i) t.add(mons[i], BigInt(counts[i]));
    return t;
}

// |Z^A/K| det(I(z) - P), I(z) = diag(1/(1-z_a))
inline SeriesTable series_determinant(const Network& net, int maxdeg) {
    detail::require_agent_sc(net);
    require_irreducible(local_groups(net));
    auto P = production_matrix(net);
    std::size_t n = net.num_letters();
    std::vector<Series> diag;
    for (std::size_t a = 0; a < n; ++a) diag.push_back(Series::geometric(n, maxdeg, a));
    RatMatrix C(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) C(i, j) = -P(i, j);
    Series det = detail::diagonal_series_determinant(diag, C);
    det *= Rational(total_kernel(net).index());
    return det.to_table();
}

// Weighted Laplacian pieces: A_G(y)(u,v) = sum of y_e over edges v -> u, D(v) = sum over Out(v).
inline RatMatrix weighted_adjacency(const Digraph& g, const Vec& y) {
    RatMatrix A(g.size(), g.size());
    for (const auto& e : g.edges()) A(e.target, e.source) += Rational(y.at(e.id));
    return A;
}

inline Vec weighted_outdeg(const Digraph& g, const Vec& y) {
    Vec d(g.size(), 0);
    for (const auto& e : g.edges()) d[e.source] += y.at(e.id);
    return d;
}

// det(D_G(y,0) - A_G(y); V \ S)
inline BigInt forests_rooted_at(const Digraph& g, const std::set<Vertex>& S, const Vec& y) {
    auto A = weighted_adjacency(g, y);
    auto D = weighted_outdeg(g, y);
    std::vector<Vertex> rest;
    for (Vertex v = 0; v < g.size(); ++v)
        if (!S.count(v)) rest.push_back(v);
    if (rest.empty()) return 1;
    RatMatrix L(rest.size(), rest.size());
    for (std::size_t i = 0; i < rest.size(); ++i)
        for (std::size_t j = 0; j < rest.size(); ++j)
            L(i, j) = (i == j ? Rational(D[rest[i]]) : Rational(0)) - A(rest[i], rest[j]);
    return numer(determinant(L));
}

// Sum over directed forests rooted at S of the product of edge weights, by enumeration.
inline BigInt forests_enumerated(const Digraph& g, const std::set<Vertex>& S, const Vec& y) {
    std::vector<Vertex> rest;
    for (Vertex v = 0; v < g.size(); ++v)
        if (!S.count(v)) rest.push_back(v);
    std::vector<std::size_t> choice(rest.size(), 0);
    for (Vertex v : rest)
        if (g.outdeg(v) == 0) return 0;
    BigInt total = 0;
    std::vector<Vertex> parent(g.size());
    while (true) {
        BigInt w = 1;
        for (std::size_t i = 0; i < rest.size(); ++i) {
            const auto& e = g.edge(g.out_edges(rest[i])[choice[i]]);
            parent[rest[i]] = e.target;
            w *= y.at(e.id);
        }
        // every walk along chosen edges must reach S
        bool ok = true;
        for (Vertex v : rest) {
            Vertex u = v;
            std::size_t steps = 0;
            while (!S.count(u) && steps <= g.size()) {
                u = parent[u];
                ++steps;
            }
            if (!S.count(u)) {
                ok = false;
                break;
            }
        }
        if (ok) total += w;
        std::size_t i = 0;
        while (i < rest.size() && ++choice[i] == g.outdeg(rest[i])) choice[i++] = 0;
        if (i == rest.size()) break;
    }
    return total;
}

struct MasterReport {
    bool ok = false;
    SeriesTable determinant_side, combinatorial_side;
    std::vector<Exponent> mismatches;
};

// det(D_G(y,z) - A_G(y)) against the sum over recurrent x.q of z^x y_q, at integer y.
inline MasterReport master_identity_check(const Digraph& g, const Vec& y, int maxdeg) {
    if (y.size() != g.num_edges()) throw Error(Errc::InvalidSpec, "one y value per edge required");
    if (!g.strongly_connected()) throw Error(Errc::NotStronglyConnected, "strongly connected digraph required");
    std::size_t n = g.size();
    auto A = weighted_adjacency(g, y);
    auto D = weighted_outdeg(g, y);
    std::vector<Series> diag;
    for (Vertex v = 0; v < n; ++v) diag.push_back(Series::geometric(n, maxdeg, v, Rational(D[v])));
    RatMatrix C(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) C(i, j) = -A(i, j);
    MasterReport rep;
    rep.determinant_side = detail::diagonal_series_determinant(diag, C).to_table();

    // rotor state i at v is out-edge i of v
    auto net = rotor_network(g);
    CycleTester test(net);
    auto loc = enumerate_loc(test.groups());
    rep.combinatorial_side.nvars = n;
    rep.combinatorial_side.maxdeg = maxdeg;
    for (const auto& e : detail::monomials(n, maxdeg)) {
        Vec x(e.begin(), e.end());
        BigInt sum = 0;
        for (const auto& q : loc) {
            if (!test(Configuration{x, q})) continue;
            BigInt w = 1;
            for (Vertex v = 0; v < n; ++v) w *= y[g.out_edges(v)[q[v]]];
            sum += w;
        }
        rep.combinatorial_side.add(e, sum);
    }
    rep.mismatches = rep.determinant_side.mismatches(rep.combinatorial_side);
    rep.ok = rep.mismatches.empty();
    return rep;
}

struct ComponentCount {
    std::size_t classes = 0;
    std::size_t configurations = 0;      // recurrent configurations at this level
    std::optional<BigInt> tor_prediction;  // agent networks, m >= 1
    bool complete = true;                // false when the budget ran out
};

// Recurrent configurations at level m, partitioned by the legal relation.
inline ComponentCount components_per_level(const Network& net, std::int64_t m, std::size_t budget = 1'000'000) {
    auto d = critical_data(net);
    auto lt = level_table(net, d);
    auto cptN = network_capacity(net);
    if (cptN.status == CapacityStatus::BoxTooSmall)
        throw Error(Errc::PreconditionViolated, "capacity search box too small");
    ComponentCount res;
    if (is_agent(net) && m >= 1) res.tor_prediction = torsion_group(net).torsion_order();

    std::vector<Configuration> recurrent;
    std::size_t n = net.num_letters();
    std::size_t seen = 0;
    for (const auto& q : enumerate_loc(d.groups)) {
        std::int64_t rest = m - (cptN.value - loc_state_capacity(lt, q));
        if (rest < 0) continue;
        // x >= 0 with s^T x = rest
        Vec x(n, 0);
        std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t i, std::int64_t left) {
            if (!res.complete) return;
            if (i + 1 == n) {
                if (left % d.s[i]) return;
                x[i] = left / d.s[i];
                if (++seen > budget) {
                    res.complete = false;
                    return;
                }
                Configuration c{x, q};
                if (burning_test_critical(net, c, d.r).verdict) recurrent.push_back(c);
                return;
            }
            for (std::int64_t k = 0; k * d.s[i] <= left; ++k) {
                x[i] = k;
                rec(i + 1, left - k * d.s[i]);
            }
        };
        rec(0, rest);
    }
    res.configurations = recurrent.size();
    // the forward closure of a recurrent configuration is its whole recurrent component
    std::unordered_set<Configuration, ConfigurationHash> assigned;
    for (const auto& c : recurrent) {
        if (assigned.count(c)) continue;
        ++res.classes;
        std::vector<Configuration> stack{c};
        assigned.insert(c);
        while (!stack.empty()) {
            auto cur = std::move(stack.back());
            stack.pop_back();
            for (auto& nb : detail::legal_neighbours(net, cur))
                if (assigned.insert(nb).second) {
                    if (assigned.size() > budget) {
                        res.complete = false;
                        return res;
                    }
                    stack.push_back(std::move(nb));
                }
        }
    }
    return res;
}

// wt(x.q) = sum_k x(v_k) k + wt(q(v_k)) mod n for the rotor network on the
// bidirected cycle; rotor state 1 is the edge (v_k, v_{k-1}) of weight 1.
inline std::int64_t cycle_weight(std::size_t n, const Configuration& cfg) {
    if (cfg.x.size() != n || cfg.q.size() != n) throw Error(Errc::PreconditionViolated, "configuration size must match the cycle");
    std::int64_t w = 0;
    auto N = static_cast<std::int64_t>(n);
    for (std::size_t k = 0; k < n; ++k) {
        w += cfg.x[k] % N * static_cast<std::int64_t>(k);
        w += static_cast<std::int64_t>(cfg.q[k]);
    }
    return ((w % N) + N) % N;
}

// Recurrent configurations with m chips on the rotor network of C_n, bucketed by weight.
inline std::vector<std::uint64_t> weight_class_counts(std::size_t n, std::int64_t m, unsigned jobs = 1) {
    if (n < 3) throw Error(Errc::PreconditionViolated, "cycle needs at least 3 vertices");
    auto net = rotor_network(bidirected_cycle(n));
    CycleTester test(net);
    auto loc = enumerate_loc(test.groups());
    // compositions of m into n parts
    std::vector<Vec> inputs;
    Vec x(n, 0);
    std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t i, std::int64_t left) {
        if (i + 1 == n) {
            x[i] = left;
            inputs.push_back(x);
            return;
        }
        for (std::int64_t k = 0; k <= left; ++k) {
            x[i] = k;
            rec(i + 1, left - k);
        }
    };
    rec(0, m);
    std::vector<std::vector<std::uint64_t>> partial(inputs.size(), std::vector<std::uint64_t>(n, 0));
    detail::parallel_for(inputs.size(), jobs, [&](std::size_t i) {
        for (const auto& q : loc) {
            Configuration c{inputs[i], q};
            if (test(c)) ++partial[i][static_cast<std::size_t>(cycle_weight(n, c))];
        }
    });
    std::vector<std::uint64_t> counts(n, 0);
    for (const auto& p : partial)
        for (std::size_t k = 0; k < n; ++k) counts[k] += p[k];
    return counts;
}

} // namespace abelnet
