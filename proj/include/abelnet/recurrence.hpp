#pragma once

#include "abelnet/algebra.hpp"

#include <set>

namespace abelnet {

// Everything the critical-network routines need, computed once.
struct CriticalData {
    RatMatrix P;
    Vec r;
    Vec s;
    std::vector<LocalGroup> groups;
};

inline CriticalData critical_data(const Network& net) {
    CriticalData d;
    d.groups = local_groups(net);
    require_irreducible(d.groups);
    d.P = production_matrix(net);
    detail::require_critical_sc(classify(d.P));
    d.r = period_vector(net);
    d.s = exchange_rate(net);
    return d;
}

struct RecurrenceCertificate {
    bool verdict = false;
    Word witness;
    bool state_returned = false;
};

// Burning test: greedily build an r-maximal legal word. `order` lists letters
// by priority; empty means ascending canonical order.
inline RecurrenceCertificate burning_test_critical(const Network& net, const Configuration& cfg,
                                                   const Vec& r, std::vector<Letter> order = {}) {
    if (order.empty())
        for (Letter a = 0; a < net.num_letters(); ++a) order.push_back(a);
    RecurrenceCertificate cert;
    Configuration cur = cfg;
    Vec used(net.num_letters(), 0);
    while (true) {
        bool moved = false;
        for (Letter a : order)
            if (used[a] < r[a] && cur.x[a] >= 1) {
                apply(net, cur, a);
                ++used[a];
                cert.witness.push_back(a);
                moved = true;
                break;
            }
        if (!moved) break;
    }
    cert.state_returned = cur.q == cfg.q;
    cert.verdict = used == r && cert.state_returned;
    return cert;
}

inline RecurrenceCertificate burning_test_critical(const Network& net, const Configuration& cfg) {
    auto P = production_matrix(net);
    detail::require_critical_sc(classify(P));
    return burning_test_critical(net, cfg, period_vector(net));
}

namespace detail {

inline RatMatrix identity_minus(const RatMatrix& P) {
    RatMatrix M = RatMatrix::identity(P.rows());
    for (std::size_t i = 0; i < P.rows(); ++i)
        for (std::size_t j = 0; j < P.cols(); ++j) M(i, j) -= P(i, j);
    return M;
}

} // namespace detail

// Upper bound on the length of any legal execution from x.q in a subcritical
// network: (I-P)|u| <= x^+ + c where c bounds N_n(q) - P n. The bound needs
// every t_a cycle to lie inside Loc; otherwise `fallback` is returned.
inline std::size_t stabilization_bound(const Network& net, const Vec& x, std::size_t fallback = default_step_cap) {
    auto gs = local_groups(net);
    require_irreducible(gs);
    auto P = production_matrix(net);
    auto inv = inverse(detail::identity_minus(P));
    if (!inv) return fallback;
    std::size_t nl = net.num_letters();
    RatVec c(nl, Rational(0));
    for (std::size_t v = 0; v < net.num_vertices(); ++v) {
        const auto& p = net.processors[v];
        const auto& G = gs[v];
        std::size_t k = p.letters.size();
        std::vector<std::int64_t> hi(k);
        std::size_t boxes = 1;
        for (std::size_t i = 0; i < k; ++i) {
            // every cycle of T_a must sit inside Loc
            auto m = detail::letter_map(p, i);
            auto img = detail::power(m, p.num_states());
            for (State q : img)
                if (!G.contains(q)) return fallback;
            hi[i] = static_cast<std::int64_t>(p.num_states()) + G.order[i];
            boxes *= static_cast<std::size_t>(hi[i]);
            if (boxes > 2'000'000) return fallback;
        }
        RatVec cv(nl, Rational(0));
        bool first = true;
        std::vector<std::int64_t> n(k, 0);
        for (State q0 = 0; q0 < p.num_states(); ++q0) {
            std::fill(n.begin(), n.end(), 0);
            while (true) {
                // emissions of n processed at q0, then subtract P n
                Vec em(nl, 0);
                State q = q0;
                for (std::size_t i = 0; i < k; ++i)
                    for (std::int64_t t = 0; t < n[i]; ++t) {
                        for (const auto& [b, cnt] : p.emit[q][i]) em[b] += cnt;
                        q = p.next[q][i];
                    }
                for (Letter b = 0; b < nl; ++b) {
                    Rational val(em[b]);
                    for (std::size_t i = 0; i < k; ++i) val -= P(b, p.letters[i]) * n[i];
                    if (first || val > cv[b]) cv[b] = val;
                }
                first = false;
                std::size_t i = 0;
                while (i < k && ++n[i] == hi[i]) n[i++] = 0;
                if (i == k) break;
            }
        }
        for (Letter b = 0; b < nl; ++b) c[b] += cv[b];
    }
    RatVec rhs(nl);
    for (Letter b = 0; b < nl; ++b) rhs[b] = Rational(std::max<std::int64_t>(x[b], 0)) + c[b];
    auto u = mat_vec(*inv, rhs);
    Rational total = 0;
    for (const auto& e : u) total += e;
    if (total < 0) return 0;
    BigInt t = numer(total) / denom(total) + 1;
    if (t > BigInt(fallback)) return fallback;
    return static_cast<std::size_t>(to_i64(t));
}

// (I-P)k.q stabilizes to 0.q
inline bool burning_test_subcritical(const Network& net, const TotalState& q, const Vec& k) {
    auto P = production_matrix(net);
    if (classify(P).overall != Criticality::Subcritical)
        throw Error(Errc::PreconditionViolated, "burning_test_subcritical needs a subcritical network");
    std::size_t n = net.num_letters();
    if (k.size() != n) throw Error(Errc::BadWitnessVector, "k has wrong length");
    for (auto e : k)
        if (e < 1) throw Error(Errc::BadWitnessVector, "k must be >= 1");
    if (!total_kernel(net).contains(k)) throw Error(Errc::BadWitnessVector, "k is not in the total kernel");
    auto Pk = mat_vec(P, k);
    Vec x(n);
    for (std::size_t a = 0; a < n; ++a) {
        if (Pk[a] > Rational(k[a])) throw Error(Errc::BadWitnessVector, "P k <= k fails");
        Rational v = Rational(k[a]) - Pk[a];
        if (!is_integer(v)) throw Error(Errc::BadWitnessVector, "(I-P)k is not integral");
        x[a] = to_i64(numer(v));
    }
    Configuration start{x, q};
    auto res = stabilize(net, start, stabilization_bound(net, x) + 1);
    return res.halted && res.cfg == Configuration{Vec(n, 0), q};
}

inline bool is_agent(const Network& net) {
    for (const auto& p : net.processors)
        for (const auto& row : p.emit)
            for (const auto& em : row) {
                std::int64_t total = 0;
                for (const auto& e : em) total += e.second;
                if (total != 1) return false;
            }
    return true;
}

struct RotorDigraph {
    std::vector<Letter> successor;
};

namespace detail {

// Letter emitted by processing a at t_a^{-1}(q) for an agent network.
inline Letter rotor_successor(const Network& net, const std::vector<LocalGroup>& gs, const TotalState& q, Letter a) {
    Vertex v = net.owner[a];
    const auto& G = gs[v];
    std::size_t i = G.index.at(q[v]);
    State prev = G.states[G.inv[net.local[a]][i]];
    return net.emission(prev, a).front().first;
}

} // namespace detail

inline RotorDigraph rotor_digraph(const Network& net, const TotalState& q) {
    if (!is_agent(net)) throw Error(Errc::NotAgentNetwork, "rotor digraph needs an agent network");
    auto gs = local_groups(net);
    require_irreducible(gs);
    if (!is_locally_recurrent(gs, q)) throw Error(Errc::NotLocallyRecurrent, "state is not locally recurrent");
    RotorDigraph rd;
    for (Letter a = 0; a < net.num_letters(); ++a) rd.successor.push_back(detail::rotor_successor(net, gs, q, a));
    return rd;
}

// True iff every cycle of the functional digraph meets a marked letter.
inline bool cycles_meet(const std::vector<Letter>& succ, const std::vector<char>& marked) {
    std::size_t n = succ.size();
    std::vector<char> color(n, 0);  // 0 new, 1 on current path, 2 done
    for (std::size_t s = 0; s < n; ++s) {
        if (color[s]) continue;
        std::vector<std::size_t> path;
        std::size_t a = s;
        while (color[a] == 0) {
            color[a] = 1;
            path.push_back(a);
            a = succ[a];
        }
        if (color[a] == 1) {
            bool hit = false;
            std::size_t b = a;
            do {
                if (marked[b]) hit = true;
                b = succ[b];
            } while (b != a);
            if (!hit) return false;
        }
        for (auto p : path) color[p] = 2;
    }
    return true;
}

// Reusable cycle test: the successor table is precomputed per Loc state.
class CycleTester {
public:
    explicit CycleTester(const Network& net) : net_(net), gs_(local_groups(net)) {
        if (!is_agent(net)) throw Error(Errc::NotAgentNetwork, "cycle test needs an agent network");
        require_irreducible(gs_);
    }

    const std::vector<LocalGroup>& groups() const { return gs_; }

    bool operator()(const Configuration& cfg) const {
        for (auto e : cfg.x)
            if (e < 0) return false;
        if (!is_locally_recurrent(gs_, cfg.q)) return false;
        std::size_t n = net_.num_letters();
        std::vector<Letter> succ(n);
        std::vector<char> marked(n);
        for (Letter a = 0; a < n; ++a) {
            succ[a] = detail::rotor_successor(net_, gs_, cfg.q, a);
            marked[a] = cfg.x[a] > 0;
        }
        return cycles_meet(succ, marked);
    }

private:
    const Network& net_;
    std::vector<LocalGroup> gs_;
};

inline bool cycle_test(const Network& net, const Configuration& cfg) { return CycleTester(net)(cfg); }

enum class CapacityStatus { Value, Unbounded, BoxTooSmall };

struct CapacityResult {
    CapacityStatus status = CapacityStatus::Value;
    std::int64_t value = 0;   // best s^T z found
    Vec maximizer;
    std::int64_t box = 0;
};

namespace detail {

inline std::int64_t dot(const Vec& a, const Vec& b) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

} // namespace detail

// Relative levels on Loc: lvl(t_n q) - lvl(q) = s^T(n - N_n(q)), additive over vertices.
struct LevelTable {
    std::vector<std::map<State, std::int64_t>> rel;  // per vertex
    std::int64_t rel_min = 0, rel_max = 0;
    bool loc_is_everything = true;

    std::int64_t rel_of(const TotalState& q) const {
        std::int64_t t = 0;
        for (std::size_t v = 0; v < q.size(); ++v) t += rel[v].at(q[v]);
        return t;
    }
};

inline LevelTable level_table(const Network& net, const CriticalData& d) {
    LevelTable lt;
    for (std::size_t v = 0; v < net.num_vertices(); ++v) {
        const auto& G = d.groups[v];
        const auto& p = net.processors[v];
        std::map<State, std::int64_t> rel;
        std::int64_t lo = 0, hi = 0;
        for (std::size_t i = 0; i < G.states.size(); ++i) {
            // walk the BFS path from states[0]
            State q = G.states[0];
            std::int64_t val = 0;
            for (std::size_t a = 0; a < p.letters.size(); ++a)
                for (std::int64_t t = 0; t < G.path[i][a]; ++t) {
                    val += d.s[p.letters[a]];
                    for (const auto& [b, c] : p.emit[q][a]) val -= d.s[b] * c;
                    q = p.next[q][a];
                }
            rel[G.states[i]] = val;
            if (i == 0 || val < lo) lo = val;
            if (i == 0 || val > hi) hi = val;
        }
        lt.rel.push_back(std::move(rel));
        lt.rel_min += lo;
        lt.rel_max += hi;
        if (G.states.size() != p.num_states()) lt.loc_is_everything = false;
    }
    return lt;
}

// Exact capacity of a locally recurrent state: cpt(q) = max_Loc lvl - lvl(q).
inline std::int64_t loc_state_capacity(const LevelTable& lt, const TotalState& q) {
    return lt.rel_max - lt.rel_of(q);
}

inline std::int64_t default_capacity_box(const Network& net, const CriticalData& d, const LevelTable& lt) {
    std::int64_t rmax = *std::max_element(d.r.begin(), d.r.end());
    std::int64_t extra = lt.rel_max - lt.rel_min;
    if (!lt.loc_is_everything) {
        extra = 0;
        for (const auto& p : net.processors) extra += static_cast<std::int64_t>(p.num_states());
    }
    return rmax + std::max<std::int64_t>(extra, 1);
}

// Bounded search for max s^T z over z in [-box, box]^A with z.q halting.
inline CapacityResult capacity(const Network& net, const TotalState& q, std::int64_t box = 0) {
    CapacityResult res;
    auto P = production_matrix(net);
    auto nc = classify(P);
    if (!nc.strongly_connected) throw Error(Errc::NotStronglyConnected, "capacity needs a strongly connected network");
    if (nc.overall == Criticality::Subcritical) {
        res.status = CapacityStatus::Unbounded;
        return res;
    }
    if (nc.overall == Criticality::Supercritical)
        throw Error(Errc::NotCritical, "no exchange rate for supercritical networks");
    auto d = critical_data(net);
    if (box <= 0) box = default_capacity_box(net, d, level_table(net, d));
    res.box = box;
    std::size_t n = net.num_letters();
    Vec z(n, -box);
    bool found = false, interior = false;
    // scan the last coordinate downward; the halting set is closed downward
    while (true) {
        std::int64_t prefix = 0;
        for (std::size_t i = 0; i + 1 < n; ++i) prefix += d.s[i] * z[i];
        std::int64_t top = box;
        if (found) {
            // skip columns that cannot beat the current best
            std::int64_t need = res.value - prefix;
            if (d.s[n - 1] * box < need) top = -box - 1;
        }
        for (std::int64_t last = top; last >= -box; --last) {
            z[n - 1] = last;
            std::int64_t val = prefix + d.s[n - 1] * last;
            if (found && val < res.value) break;
            if (decide_halting(net, Configuration{z, q}) == Halting::Halts) {
                bool inside = std::all_of(z.begin(), z.end(), [box](std::int64_t e) { return e < box; });
                if (!found || val > res.value) {
                    res.value = val;
                    res.maximizer = z;
                    interior = inside;
                    found = true;
                } else if (val == res.value && inside && !interior) {
                    res.maximizer = z;
                    interior = true;
                }
                break;
            }
        }
        std::size_t i = 0;
        while (i + 1 < n && ++z[i] > box) z[i++] = -box;
        if (i + 1 >= n) break;
    }
    if (!found || !interior) res.status = CapacityStatus::BoxTooSmall;
    return res;
}

// cpt(N): exact on Loc; states outside Loc use the bounded search.
inline CapacityResult network_capacity(const Network& net, std::int64_t box = 0) {
    auto nc = classify(net);
    if (!nc.strongly_connected) throw Error(Errc::NotStronglyConnected, "capacity needs a strongly connected network");
    CapacityResult res;
    if (nc.overall == Criticality::Subcritical) {
        res.status = CapacityStatus::Unbounded;
        return res;
    }
    auto d = critical_data(net);
    auto lt = level_table(net, d);
    res.value = lt.rel_max - lt.rel_min;
    if (lt.loc_is_everything) return res;
    // off-Loc states
    std::vector<TotalState> all;
    TotalState q(net.num_vertices(), 0);
    while (true) {
        if (!is_locally_recurrent(d.groups, q)) {
            auto c = capacity(net, q, box);
            if (c.status == CapacityStatus::BoxTooSmall) res.status = CapacityStatus::BoxTooSmall;
            res.value = std::max(res.value, c.value);
        }
        std::size_t v = 0;
        while (v < q.size() && ++q[v] == net.processors[v].num_states()) q[v++] = 0;
        if (v == q.size()) break;
    }
    return res;
}

// lvl(x.q) = cpt(N) - cpt(q) + s^T x
inline std::int64_t level(const Network& net, const Configuration& cfg, std::int64_t box = 0) {
    auto d = critical_data(net);
    auto lt = level_table(net, d);
    auto cptN = network_capacity(net, box);
    if (cptN.status == CapacityStatus::BoxTooSmall)
        throw Error(Errc::PreconditionViolated, "capacity search box too small");
    std::int64_t cq;
    if (is_locally_recurrent(d.groups, cfg.q)) {
        cq = loc_state_capacity(lt, cfg.q);
    } else {
        auto c = capacity(net, cfg.q, box);
        if (c.status == CapacityStatus::BoxTooSmall)
            throw Error(Errc::PreconditionViolated, "capacity search box too small");
        cq = c.value;
    }
    return cptN.value - cq + detail::dot(d.s, cfg.x);
}

// Stop(N) = N ∩ ⋃_{q ∈ Loc} (lvl(q) - S(s))
inline std::set<std::int64_t> stoppable_levels(const Network& net) {
    auto d = critical_data(net);
    auto lt = level_table(net, d);
    auto cptN = network_capacity(net);
    if (cptN.status == CapacityStatus::BoxTooSmall)
        throw Error(Errc::PreconditionViolated, "capacity search box too small");
    std::set<std::int64_t> levels;
    for (const auto& q : enumerate_loc(d.groups)) levels.insert(cptN.value - loc_state_capacity(lt, q));
    std::int64_t top = levels.empty() ? 0 : *levels.rbegin();
    std::vector<char> in_semigroup(static_cast<std::size_t>(top) + 1, 0);
    in_semigroup[0] = 1;
    for (std::int64_t m = 1; m <= top; ++m)
        for (auto g : d.s)
            if (g <= m && in_semigroup[static_cast<std::size_t>(m - g)]) {
                in_semigroup[static_cast<std::size_t>(m)] = 1;
                break;
            }
    std::set<std::int64_t> stop;
    for (auto L : levels)
        for (std::int64_t m = 0; m <= L; ++m)
            if (in_semigroup[static_cast<std::size_t>(L - m)]) stop.insert(m);
    return stop;
}

} // namespace abelnet
