#pragma once

#include "abelnet/network.hpp"

#include <functional>
#include <optional>
#include <unordered_set>

namespace abelnet {

inline constexpr std::size_t default_step_cap = 10'000'000;

// In-place pi_a. The message is read from the state before the transition.
inline void apply(const Network& net, Configuration& cfg, Letter a, Vec* emitted = nullptr) {
    Vertex v = net.owner[a];
    State q = cfg.q[v];
    for (const auto& [b, c] : net.emission(q, a)) {
        cfg.x[b] += c;
        if (emitted) (*emitted)[b] += c;
    }
    cfg.x[a] -= 1;
    cfg.q[v] = net.next_state(q, a);
}

inline Configuration step(const Network& net, Configuration cfg, Letter a) {
    net.check_letter(a);
    apply(net, cfg, a);
    return cfg;
}

struct Execution {
    Configuration cfg;
    bool legal = true;
};

inline Execution execute_word(const Network& net, Configuration cfg, const Word& w) {
    bool legal = true;
    for (Letter a : w) {
        net.check_letter(a);
        if (cfg.x[a] < 1) legal = false;
        apply(net, cfg, a);
    }
    return {std::move(cfg), legal};
}

inline bool is_legal(const Network& net, const Configuration& cfg, const Word& w) {
    return execute_word(net, cfg, w).legal;
}

inline Configuration execute_vector(const Network& net, Configuration cfg, const FiringVector& n) {
    for (Letter a = 0; a < net.num_letters(); ++a)
        for (std::int64_t k = 0; k < n[a]; ++k) apply(net, cfg, a);
    return cfg;
}

// N_w(q): letters emitted while executing w from state q.
inline Vec emitted_by(const Network& net, const TotalState& q, const Word& w) {
    Configuration cfg{Vec(net.num_letters(), 0), q};
    Vec out(net.num_letters(), 0);
    for (Letter a : w) apply(net, cfg, a, &out);
    return out;
}

inline Vec emitted_by(const Network& net, const TotalState& q, const FiringVector& n) {
    Configuration cfg{Vec(net.num_letters(), 0), q};
    Vec out(net.num_letters(), 0);
    for (Letter a = 0; a < net.num_letters(); ++a)
        for (std::int64_t k = 0; k < n[a]; ++k) apply(net, cfg, a, &out);
    return out;
}

// t_n q
inline TotalState transition(const Network& net, TotalState q, const FiringVector& n) {
    for (Letter a = 0; a < net.num_letters(); ++a) {
        Vertex v = net.owner[a];
        for (std::int64_t k = 0; k < n[a]; ++k) q[v] = net.next_state(q[v], a);
    }
    return q;
}

// w \ n: drops the first n(a) occurrences of each letter a.
inline Word remove(const Word& w, const FiringVector& n) {
    Vec left = n;
    Word out;
    out.reserve(w.size());
    for (Letter a : w) {
        if (a < left.size() && left[a] > 0) {
            --left[a];
            continue;
        }
        out.push_back(a);
    }
    return out;
}

inline bool is_stable(const Configuration& cfg) {
    return std::all_of(cfg.x.begin(), cfg.x.end(), [](std::int64_t v) { return v <= 0; });
}

using Policy = std::function<std::optional<Letter>(const Network&, const Configuration&)>;

inline std::optional<Letter> lowest_index_policy(const Network&, const Configuration& cfg) {
    for (Letter a = 0; a < cfg.x.size(); ++a)
        if (cfg.x[a] >= 1) return a;
    return std::nullopt;
}

inline std::optional<Letter> highest_index_policy(const Network&, const Configuration& cfg) {
    for (Letter a = cfg.x.size(); a-- > 0;)
        if (cfg.x[a] >= 1) return a;
    return std::nullopt;
}

struct StabilizeResult {
    bool halted = false;
    Configuration cfg;
    Word trace;
};

inline StabilizeResult stabilize(const Network& net, Configuration cfg,
                                 std::size_t step_cap = default_step_cap,
                                 const Policy& policy = lowest_index_policy) {
    if (step_cap == 0) throw Error(Errc::PreconditionViolated, "step_cap must be positive");
    StabilizeResult res;
    for (std::size_t i = 0; i <= step_cap; ++i) {
        auto a = policy(net, cfg);
        if (!a) {
            res.halted = true;
            break;
        }
        if (i == step_cap) break;
        res.trace.push_back(*a);
        apply(net, cfg, *a);
    }
    res.cfg = std::move(cfg);
    return res;
}

enum class Halting { Halts, Loops, Unknown };

// Greedy stabilization with exact repeat detection. A repeated configuration
// along a legal run is an infinite legal execution, hence no halting.
inline Halting decide_halting(const Network& net, Configuration cfg,
                              std::size_t step_cap = default_step_cap,
                              Configuration* out = nullptr) {
    std::unordered_set<Configuration, ConfigurationHash> seen;
    for (std::size_t i = 0; i < step_cap; ++i) {
        auto a = lowest_index_policy(net, cfg);
        if (!a) {
            if (out) *out = cfg;
            return Halting::Halts;
        }
        if (!seen.insert(cfg).second) return Halting::Loops;
        apply(net, cfg, *a);
    }
    return Halting::Unknown;
}

inline Word exchange_join(const Network& net, const Configuration& cfg, const Word& w1, const Word& w2) {
    if (!is_legal(net, cfg, w1) || !is_legal(net, cfg, w2))
        throw Error(Errc::IllegalInput, "exchange_join needs two legal words");
    return remove(w2, letter_counts(net, w1));
}

} // namespace abelnet
