#pragma once

#include "abelnet/recurrence.hpp"

#include <map>
#include <optional>
#include <random>
#include <unordered_map>

namespace abelnet {

struct UpdateRule {
    enum Kind { Parallel, Sequential, Savings, Custom } kind = Parallel;
    std::vector<Vertex> order;   // sequential; empty = vertex order
    std::set<Vertex> S;          // savings
    std::function<Word(const Network&, const Configuration&)> custom;
    std::string name = "parallel";

    static UpdateRule parallel() { return {}; }
    static UpdateRule sequential(std::vector<Vertex> order = {}) {
        UpdateRule r;
        r.kind = Sequential;
        r.order = std::move(order);
        r.name = "sequential";
        return r;
    }
    static UpdateRule savings(std::set<Vertex> S) {
        UpdateRule r;
        r.kind = Savings;
        r.S = std::move(S);
        r.name = "savings";
        return r;
    }
    static UpdateRule make_custom(std::string name, std::function<Word(const Network&, const Configuration&)> f) {
        UpdateRule r;
        r.kind = Custom;
        r.custom = std::move(f);
        r.name = std::move(name);
        return r;
    }
};

// Evaluates a rule on one network. Thresholds are the orders of t_v on Loc,
// which is outdeg(v) for sandpile networks.
class Updater {
public:
    Updater(const Network& net, UpdateRule rule) : net_(net), rule_(std::move(rule)) {
        if (rule_.kind == UpdateRule::Custom) {
            if (!rule_.custom) throw Error(Errc::RuleNotApplicable, "custom rule without a policy");
            return;
        }
        for (const auto& p : net.processors)
            if (p.letters.size() != 1)
                throw Error(Errc::RuleNotApplicable, rule_.name + " update needs a unary network");
        auto gs = local_groups(net);
        for (const auto& g : gs) theta_.push_back(g.order.at(0));
        if (rule_.kind == UpdateRule::Sequential && rule_.order.empty())
            for (Vertex v = 0; v < net.num_vertices(); ++v) rule_.order.push_back(v);
    }

    Word operator()(const Configuration& cfg) const {
        switch (rule_.kind) {
        case UpdateRule::Parallel: return parallel(cfg, [](Vertex) { return true; });
        case UpdateRule::Sequential: {
            Configuration cur = cfg;
            Word w;
            for (Vertex v : rule_.order) {
                Letter a = net_.processors[v].letters[0];
                auto k = std::min<std::int64_t>(std::max<std::int64_t>(cur.x[a], 0), theta_[v]);
                for (std::int64_t i = 0; i < k; ++i) {
                    apply(net_, cur, a);
                    w.push_back(a);
                }
            }
            return w;
        }
        case UpdateRule::Savings: {
            bool outside_active = false;
            for (Vertex v = 0; v < net_.num_vertices(); ++v)
                if (!rule_.S.count(v) && cfg.x[net_.processors[v].letters[0]] >= 1) outside_active = true;
            if (outside_active) return parallel(cfg, [this](Vertex v) { return !rule_.S.count(v); });
            return parallel(cfg, [this](Vertex v) { return rule_.S.count(v) != 0; });
        }
        case UpdateRule::Custom: {
            Word w = rule_.custom(net_, cfg);
            if (!is_legal(net_, cfg, w)) throw Error(Errc::PreconditionViolated, "custom rule produced an illegal word");
            return w;
        }
        }
        return {};
    }

    const Network& network() const { return net_; }

private:
    template <class Pred>
    Word parallel(const Configuration& cfg, Pred use) const {
        Word w;
        for (Vertex v = 0; v < net_.num_vertices(); ++v) {
            if (!use(v)) continue;
            Letter a = net_.processors[v].letters[0];
            auto k = std::min<std::int64_t>(std::max<std::int64_t>(cfg.x[a], 0), theta_[v]);
            w.insert(w.end(), static_cast<std::size_t>(k), a);
        }
        return w;
    }

    const Network& net_;
    UpdateRule rule_;
    std::vector<std::int64_t> theta_;
};

inline Word update_word(const UpdateRule& rule, const Network& net, const Configuration& cfg) {
    return Updater(net, rule)(cfg);
}

// Rule given by explicit words on listed configurations, parallel elsewhere.
inline UpdateRule table_rule(std::string name, std::vector<std::pair<Configuration, Word>> table) {
    auto shared = std::make_shared<std::vector<std::pair<Configuration, Word>>>(std::move(table));
    return UpdateRule::make_custom(std::move(name), [shared](const Network& net, const Configuration& cfg) {
        for (const auto& [c, w] : *shared)
            if (c == cfg) return w;
        return Updater(net, UpdateRule::parallel())(cfg);
    });
}

struct ActivityResult {
    RatVec rates;
    std::size_t transient = 0;
    std::size_t period = 0;
    std::vector<Configuration> orbit;  // configurations up to the first repeat
    std::vector<Word> words;
};

inline ActivityResult activity_vector(const Network& net, const Configuration& cfg, const UpdateRule& rule,
                                      std::size_t cap = 1'000'000) {
    Updater u(net, rule);
    ActivityResult res;
    std::unordered_map<Configuration, std::size_t, ConfigurationHash> seen;
    Configuration cur = cfg;
    for (std::size_t t = 0; t <= cap; ++t) {
        auto [it, fresh] = seen.emplace(cur, t);
        if (!fresh) {
            res.transient = it->second;
            res.period = t - it->second;
            Vec total(net.num_letters(), 0);
            for (std::size_t i = res.transient; i < t; ++i)
                for (Letter a : res.words[i]) ++total[a];
            for (auto c : total) res.rates.emplace_back(c, static_cast<std::int64_t>(res.period));
            return res;
        }
        res.orbit.push_back(cur);
        Word w = u(cur);
        res.words.push_back(w);
        cur = execute_word(net, cur, w).cfg;
    }
    throw Error(Errc::OrbitCapExceeded, "no repeated configuration within the orbit cap");
}

struct H2Violation {
    Configuration cfg;
    Letter a;
    Configuration after;
};

struct H12Report {
    std::vector<Configuration> h1;
    std::vector<H2Violation> h2;
    std::size_t checked = 0;
    bool ok() const { return h1.empty() && h2.empty(); }
};

// Exhaustive over x in [0, X]^A, q in Loc (while within budget), then random samples.
inline H12Report check_H1_H2(const UpdateRule& rule, const Network& net, std::size_t budget = 20000,
                             std::uint64_t seed = 1) {
    Updater u(net, rule);
    H12Report rep;
    auto gs = local_groups(net);
    auto locs = enumerate_loc(gs);
    std::int64_t X = 1;
    for (const auto& g : gs)
        for (auto o : g.order) X = std::max(X, 2 * o);
    std::size_t n = net.num_letters();
    auto check = [&](const Configuration& c) {
        ++rep.checked;
        Word w = u(c);
        bool nonzero = std::any_of(c.x.begin(), c.x.end(), [](std::int64_t e) { return e > 0; });
        if (nonzero && w.empty()) rep.h1.push_back(c);
        auto cu = letter_counts(net, w);
        for (Letter a = 0; a < n; ++a) {
            if (c.x[a] < 1) continue;
            auto c2 = step(net, c, a);
            auto cu2 = letter_counts(net, u(c2));
            cu2[a] += 1;
            if (!leq(cu, cu2)) rep.h2.push_back({c, a, c2});
        }
    };
    double exhaustive = static_cast<double>(locs.size()) * std::pow(static_cast<double>(X + 1), static_cast<double>(n));
    if (exhaustive <= static_cast<double>(budget)) {
        Vec x(n, 0);
        while (true) {
            for (const auto& q : locs) check({x, q});
            std::size_t i = 0;
            while (i < n && ++x[i] > X) x[i++] = 0;
            if (i == n) break;
        }
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> dx(0, 2 * X);
    std::uniform_int_distribution<std::size_t> dq(0, locs.size() - 1);
    while (rep.checked < budget) {
        Vec x(n);
        for (auto& e : x) e = dx(rng);
        check({x, locs[dq(rng)]});
    }
    return rep;
}

namespace detail {

inline std::vector<Configuration> legal_neighbours(const Network& net, const Configuration& c) {
    std::vector<Configuration> out;
    for (Letter a = 0; a < net.num_letters(); ++a)
        if (c.x[a] >= 1) out.push_back(step(net, c, a));
    return out;
}

} // namespace detail

// Legal relation at desk scale: true/false when decided, nullopt when the
// budget runs out.
inline std::optional<bool> same_component(const Network& net, const Configuration& c1, const Configuration& c2,
                                          std::size_t budget = 200000) {
    if (c1 == c2) return true;
    // level is conserved along legal executions from locally recurrent states
    auto nc = classify(net);
    if (nc.strongly_connected && nc.overall == Criticality::Critical) {
        auto d = critical_data(net);
        if (is_locally_recurrent(d.groups, c1.q) && is_locally_recurrent(d.groups, c2.q)) {
            auto lt = level_table(net, d);
            auto l1 = lt.rel_of(c1.q) + detail::dot(d.s, c1.x);
            auto l2 = lt.rel_of(c2.q) + detail::dot(d.s, c2.x);
            if (l1 != l2) return false;
        }
        // recurrent configurations share a component iff one reaches the other
        if (burning_test_critical(net, c1, d.r).verdict && burning_test_critical(net, c2, d.r).verdict) {
            std::unordered_set<Configuration, ConfigurationHash> seen{c1};
            std::vector<Configuration> stack{c1};
            while (!stack.empty()) {
                auto cur = std::move(stack.back());
                stack.pop_back();
                for (auto& nb : detail::legal_neighbours(net, cur)) {
                    if (nb == c2) return true;
                    if (seen.insert(nb).second) {
                        if (seen.size() > budget) return std::nullopt;
                        stack.push_back(std::move(nb));
                    }
                }
            }
            return false;
        }
    }
    using Set = std::unordered_set<Configuration, ConfigurationHash>;
    Set seen[2] = {{c1}, {c2}};
    std::vector<Configuration> frontier[2] = {{c1}, {c2}};
    std::size_t spent = 2;
    while (!frontier[0].empty() || !frontier[1].empty()) {
        for (int side = 0; side < 2; ++side) {
            std::vector<Configuration> next;
            for (const auto& c : frontier[side])
                for (auto& d : detail::legal_neighbours(net, c)) {
                    if (seen[1 - side].count(d)) return true;
                    if (seen[side].insert(d).second) {
                        next.push_back(std::move(d));
                        if (++spent > budget) return std::nullopt;
                    }
                }
            frontier[side] = std::move(next);
        }
    }
    return false;  // both legal closures explored and disjoint
}

// v_{a,z}(b) = (s(b)/s(a)) G_z(b,a) for the chain p(a,b) = s(b)P(b,a)/s(a) absorbed at z.
class VoltageTable {
public:
    explicit VoltageTable(const Network& net) : d_(critical_data(net)) {
        std::size_t n = net.num_letters();
        v_.assign(n, std::vector<RatVec>(n, RatVec(n, Rational(0))));
        for (Letter z = 0; z < n; ++z) {
            std::vector<Letter> keep;
            for (Letter b = 0; b < n; ++b)
                if (b != z) keep.push_back(b);
            std::size_t k = keep.size();
            if (k == 0) continue;
            RatMatrix M = RatMatrix::identity(k);
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < k; ++j)
                    M(i, j) -= Rational(d_.s[keep[j]]) * d_.P(keep[j], keep[i]) / Rational(d_.s[keep[i]]);
            auto G = inverse(M);
            if (!G) throw Error(Errc::PreconditionViolated, "absorbed chain is not transient");
            for (std::size_t ia = 0; ia < k; ++ia) {
                Letter a = keep[ia];
                for (std::size_t ib = 0; ib < k; ++ib) {
                    Letter b = keep[ib];
                    v_[a][z][b] = Rational(d_.s[b], d_.s[a]) * (*G)(ib, ia);
                }
            }
        }
    }

    const RatVec& operator()(Letter a, Letter z) const { return v_[a][z]; }
    const CriticalData& data() const { return d_; }

private:
    CriticalData d_;
    std::vector<std::vector<RatVec>> v_;  // [a][z]
};

inline RatVec voltage_vector(const Network& net, Letter a, Letter z) {
    net.check_letter(a);
    net.check_letter(z);
    return VoltageTable(net)(a, z);
}

// A firing vector n >= 0 with t_n q = q' on Loc, by per-vertex order arithmetic.
inline FiringVector connecting_vector(const Network& net, const std::vector<LocalGroup>& gs, const TotalState& q,
                                      const TotalState& q2) {
    FiringVector n(net.num_letters(), 0);
    for (std::size_t v = 0; v < gs.size(); ++v) {
        const auto& G = gs[v];
        const auto& from = G.path[G.index.at(q[v])];
        const auto& to = G.path[G.index.at(q2[v])];
        const auto& letters = net.processors[v].letters;
        for (std::size_t i = 0; i < letters.size(); ++i) {
            auto m = G.order[i];
            n[letters[i]] = ((to[i] - from[i]) % m + m) % m;
        }
    }
    return n;
}

struct BalanceReport {
    bool ok = true;             // two-sided bound holds for every letter
    bool equality_ok = true;    // resistance identity holds for every (a, z)
    RatVec c;
    RatVec lower_slack, upper_slack;
};

class BalanceChecker {
public:
    explicit BalanceChecker(const Network& net) : net_(net), volt_(net) {}

    // diff_{a,z}(q, q') = v^T (P|w| - N_w(q)) with t_w q = q'
    Rational diff(Letter a, Letter z, const TotalState& q, const TotalState& q2) const {
        const auto& d = volt_.data();
        auto n = connecting_vector(net_, d.groups, q, q2);
        auto N = emitted_by(net_, q, n);
        auto Pn = mat_vec(d.P, n);
        const auto& v = volt_(a, z);
        Rational s = 0;
        for (Letter b = 0; b < n.size(); ++b) s += v[b] * (Pn[b] - Rational(N[b]));
        return s;
    }

    BalanceReport operator()(const Configuration& from, const Configuration& to, const Word& w) const {
        const auto& d = volt_.data();
        if (!is_locally_recurrent(d.groups, from.q) || !is_locally_recurrent(d.groups, to.q))
            throw Error(Errc::PreconditionViolated, "states must be locally recurrent");
        auto ex = execute_word(net_, from, w);
        if (!ex.legal || !(ex.cfg == to)) throw Error(Errc::PreconditionViolated, "word is not a legal execution between the configurations");
        std::size_t n = net_.num_letters();
        auto cnt = letter_counts(net_, w);
        Vec dx(n);
        for (Letter b = 0; b < n; ++b) dx[b] = from.x[b] - to.x[b];
        BalanceReport rep;
        rep.c.assign(n, Rational(0));
        std::vector<RatVec> term(n, RatVec(n));
        for (Letter a = 0; a < n; ++a) {
            for (Letter z = 0; z < n; ++z) {
                const auto& v = volt_(a, z);
                Rational t = diff(a, z, to.q, from.q);
                for (Letter b = 0; b < n; ++b) t += v[b] * dx[b];
                term[a][z] = t;
                if (z == 0 || t > rep.c[a]) rep.c[a] = t;
                Rational rhs = t + Rational(d.r[a], d.r[z]) * cnt[z];
                if (rhs != Rational(cnt[a])) rep.equality_ok = false;
            }
        }
        Rational norm_c = 0, norm_r = 0;
        for (Letter a = 0; a < n; ++a) {
            norm_c += rep.c[a];
            norm_r += d.r[a];
        }
        Rational len(static_cast<std::int64_t>(w.size()));
        for (Letter a = 0; a < n; ++a) {
            Rational mid = Rational(cnt[a]) - len / norm_r * d.r[a];
            Rational lo = -(norm_c / norm_r) * d.r[a] - d.r[a];
            Rational hi = Rational(d.r[a]) + rep.c[a];
            rep.lower_slack.push_back(mid - lo);
            rep.upper_slack.push_back(hi - mid);
            if (!(lo < mid && mid < hi)) rep.ok = false;
        }
        return rep;
    }

private:
    const Network& net_;
    VoltageTable volt_;
};

inline BalanceReport balance_check(const Network& net, const Configuration& from, const Configuration& to,
                                   const Word& w) {
    return BalanceChecker(net)(from, to, w);
}

} // namespace abelnet
