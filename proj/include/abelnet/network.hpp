#pragma once

#include "abelnet/digraph.hpp"
#include "abelnet/error.hpp"
#include "abelnet/numeric.hpp"

#include <algorithm>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace abelnet {

using Letter = std::size_t;
using State = std::size_t;
using Word = std::vector<Letter>;
using FiringVector = Vec;
using TotalState = std::vector<State>;

// Sparse message vector: (letter, count) pairs sorted by letter, counts > 0.
using Emission = std::vector<std::pair<Letter, std::int64_t>>;

struct Processor {
    Vertex vertex = 0;
    std::vector<Letter> letters;                 // ascending global ids
    std::vector<std::string> state_names;
    std::vector<std::vector<State>> next;        // [state][local letter]
    std::vector<std::vector<Emission>> emit;     // [state][local letter]

    std::size_t num_states() const { return next.size(); }

    bool operator==(const Processor&) const = default;
};

struct Network {
    Digraph graph;
    std::vector<Processor> processors;
    std::vector<std::string> letter_names;
    std::vector<Vertex> owner;      // letter -> vertex
    std::vector<std::size_t> local; // letter -> index in its processor

    std::size_t num_letters() const { return letter_names.size(); }
    std::size_t num_vertices() const { return processors.size(); }

    const Processor& proc_of(Letter a) const { return processors[owner[a]]; }

    State next_state(State q, Letter a) const { return proc_of(a).next[q][local[a]]; }
    const Emission& emission(State q, Letter a) const { return proc_of(a).emit[q][local[a]]; }

    void check_letter(Letter a) const {
        if (a >= num_letters())
            throw Error(Errc::UnknownLetter, "letter " + std::to_string(a) + " out of range");
    }

    Letter find_letter(const std::string& name) const {
        for (Letter a = 0; a < num_letters(); ++a)
            if (letter_names[a] == name) return a;
        throw Error(Errc::UnknownLetter, "no letter named '" + name + "'");
    }

    std::size_t total_states() const {
        std::size_t n = 1;
        for (const auto& p : processors) n *= p.num_states();
        return n;
    }

    bool operator==(const Network& o) const {
        return graph == o.graph && processors == o.processors && letter_names == o.letter_names;
    }
};

// Fills letter bookkeeping and checks that the processor tables are well formed.
inline void finalize(Network& net) {
    if (net.processors.size() != net.graph.size())
        throw Error(Errc::InvalidSpec, "need exactly one processor per vertex");
    std::size_t n = net.letter_names.size();
    net.owner.assign(n, n);
    net.local.assign(n, 0);
    Letter expect = 0;
    for (std::size_t v = 0; v < net.processors.size(); ++v) {
        auto& p = net.processors[v];
        if (p.vertex != v) throw Error(Errc::InvalidSpec, "processor/vertex mismatch");
        for (std::size_t i = 0; i < p.letters.size(); ++i) {
            Letter a = p.letters[i];
            if (a >= n) throw Error(Errc::InvalidSpec, "letter id out of range");
            if (a != expect)
                throw Error(Errc::InvalidSpec, "letters must be numbered by vertex then local order");
            net.owner[a] = v;
            net.local[a] = i;
            ++expect;
        }
        if (p.num_states() == 0) throw Error(Errc::InvalidSpec, "empty state set at " + net.graph.name(v));
        if (p.state_names.size() != p.num_states())
            throw Error(Errc::InvalidSpec, "state name count mismatch at " + net.graph.name(v));
        if (p.emit.size() != p.num_states())
            throw Error(Errc::InvalidSpec, "emit table size mismatch at " + net.graph.name(v));
        for (State q = 0; q < p.num_states(); ++q) {
            if (p.next[q].size() != p.letters.size() || p.emit[q].size() != p.letters.size())
                throw Error(Errc::InvalidSpec, "table row width mismatch at " + net.graph.name(v));
            for (State t : p.next[q])
                if (t >= p.num_states()) throw Error(Errc::InvalidSpec, "next state out of range");
            for (auto& em : p.emit[q]) {
                std::sort(em.begin(), em.end());
                for (const auto& [b, c] : em)
                    if (b >= n || c <= 0) throw Error(Errc::InvalidSpec, "bad emission entry");
            }
        }
    }
    if (expect != n) throw Error(Errc::InvalidSpec, "letter without a processor");
    for (std::size_t v = 0; v < net.processors.size(); ++v)
        for (const auto& row : net.processors[v].emit)
            for (const auto& em : row)
                for (const auto& [b, c] : em) {
                    Vertex w = net.owner[b];
                    const auto& outs = net.graph.out_edges(v);
                    bool ok = std::any_of(outs.begin(), outs.end(),
                                          [&](std::size_t e) { return net.graph.edge(e).target == w; });
                    if (!ok)
                        throw Error(Errc::InvalidSpec, "letter " + net.letter_names[b] +
                                                           " emitted by " + net.graph.name(v) +
                                                           " is not owned by an out-neighbour");
                }
}

struct Configuration {
    Vec x;
    TotalState q;

    bool operator==(const Configuration&) const = default;
};

struct ConfigurationHash {
    std::size_t operator()(const Configuration& c) const noexcept {
        std::size_t h = 1469598103934665603ull;
        auto mix = [&h](std::uint64_t v) {
            h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        };
        for (auto e : c.x) mix(static_cast<std::uint64_t>(e));
        for (auto e : c.q) mix(e);
        return h;
    }
};

inline Configuration zero_config(const Network& net) {
    return {Vec(net.num_letters(), 0), TotalState(net.num_vertices(), 0)};
}

inline FiringVector letter_counts(const Network& net, const Word& w) {
    FiringVector n(net.num_letters(), 0);
    for (Letter a : w) {
        net.check_letter(a);
        ++n[a];
    }
    return n;
}

inline FiringVector unit(const Network& net, Letter a) {
    FiringVector e(net.num_letters(), 0);
    e[a] = 1;
    return e;
}

inline bool leq(const Vec& a, const Vec& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

inline std::string word_string(const Network& net, const Word& w) {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += ' ';
        s += net.letter_names[w[i]];
    }
    return s;
}

} // namespace abelnet
