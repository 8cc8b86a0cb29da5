#pragma once

#include "abelnet/abelnet.hpp"

#include <random>

namespace support {

using namespace abelnet;

// Two vertices, three parallel edges v0 -> v1 and two edges v1 -> v0.
inline Digraph two_vertex_multigraph() {
    Digraph g = Digraph::with_vertices(2);
    for (int i = 0; i < 3; ++i) g.add_edge(0, 1);
    for (int i = 0; i < 2; ++i) g.add_edge(1, 0);
    return g;
}

inline Network row_chip_firing() { return build(row_chip_firing_spec(two_vertex_multigraph())); }

// v0 cycles through two states emitting 1 then 2 letters to v1;
// v1 cycles through three states emitting 0, 1, 1 letters to v0.
inline Network no_gap_network() {
    Network net;
    net.graph = Digraph::with_vertices(2);
    net.graph.add_edge(0, 1);
    net.graph.add_edge(1, 0);
    net.letter_names = {"v0", "v1"};
    Processor p0;
    p0.vertex = 0;
    p0.letters = {0};
    p0.state_names = {"0", "1"};
    p0.next = {{1}, {0}};
    p0.emit = {{Emission{{1, 1}}}, {Emission{{1, 2}}}};
    Processor p1;
    p1.vertex = 1;
    p1.letters = {1};
    p1.state_names = {"0", "1", "2"};
    p1.next = {{1}, {2}, {0}};
    p1.emit = {{Emission{}}, {Emission{{0, 1}}}, {Emission{{0, 1}}}};
    net.processors = {p0, p1};
    finalize(net);
    return net;
}

// Inverse network on C3 with period 6: a_v emits a_{v+1} except at state 5.
inline Network inverse_c3() {
    auto g = bidirected_cycle(3);
    InverseParams ip;
    for (Vertex v = 0; v < 3; ++v) {
        Letter a = 2 * ((v + 1) % 3), b = a + 1;
        ip.m.push_back(6);
        ip.c.push_back(a);
        ip.d.push_back(b);
        std::vector<Letter> x(6, a);
        x[5] = b;
        ip.x.push_back(x);
    }
    return inverse_network(g, ip);
}

// One vertex with a loop, period 7, letter table a b a a b b b.
inline Network inverse_loop7() {
    Digraph g = Digraph::with_vertices(1);
    g.add_edge(0, 0);
    InverseParams ip;
    ip.m = {7};
    ip.c = {0};
    ip.d = {1};
    ip.x = {{0, 1, 0, 0, 1, 1, 1}};
    return inverse_network(g, ip);
}

inline Network sink_c3() { return height_arrow_sinked_network(bidirected_cycle(3), {2, 2, 2}, {0}); }

// Spanning arborescences oriented toward `root`, by choosing one out-edge per other vertex.
inline std::int64_t arborescences(const Digraph& g, Vertex root) {
    std::size_t n = g.size();
    std::vector<std::size_t> choice(n, 0);
    std::int64_t count = 0;
    while (true) {
        bool ok = true;
        for (Vertex v = 0; v < n && ok; ++v) {
            if (v == root) continue;
            Vertex cur = v;
            for (std::size_t hops = 0; cur != root; ++hops) {
                if (hops > n) {
                    ok = false;
                    break;
                }
                cur = g.out_target(cur, choice[cur]);
            }
        }
        if (ok) ++count;
        std::size_t i = 0;
        for (; i < n; ++i) {
            if (i == root) continue;
            if (++choice[i] < g.outdeg(i)) break;
            choice[i] = 0;
        }
        if (i == n) break;
    }
    return count;
}

struct Named {
    std::string name;
    Network net;
};

// Strongly connected critical networks from every critical family.
inline std::vector<Named> critical_zoo() {
    auto c3 = bidirected_cycle(3);
    return {
        {"rotor C3", rotor_network(c3)},
        {"rotor C4", rotor_network(bidirected_cycle(4))},
        {"rotor K4", rotor_network(complete_digraph(4))},
        {"sandpile C3", sandpile_network(c3)},
        {"sandpile K4", sandpile_network(complete_digraph(4))},
        {"toppling C3 t=2", toppling_network(c3, {2, 2, 2})},
        {"height-arrow C3", height_arrow_network(c3, {2, 1, 2})},
        {"height-arrow K4", height_arrow_network(complete_digraph(4), {3, 2, 1, 3})},
        {"arithmetical C3", arithmetical_network(c3, {1, 3, 3}, {2, 1, 1})},
        {"row chip-firing", row_chip_firing()},
        {"no-gap", no_gap_network()},
        {"inverse C3", inverse_c3()},
    };
}

inline Word random_word(const Network& net, std::size_t len, std::mt19937_64& rng) {
    std::uniform_int_distribution<Letter> d(0, net.num_letters() - 1);
    Word w;
    for (std::size_t i = 0; i < len; ++i) w.push_back(d(rng));
    return w;
}

// Random legal word of length <= len (stops early at a stable configuration).
inline Word random_legal_word(const Network& net, Configuration cfg, std::size_t len, std::mt19937_64& rng) {
    Word w;
    for (std::size_t i = 0; i < len; ++i) {
        std::vector<Letter> ok;
        for (Letter a = 0; a < net.num_letters(); ++a)
            if (cfg.x[a] >= 1) ok.push_back(a);
        if (ok.empty()) break;
        Letter a = ok[std::uniform_int_distribution<std::size_t>(0, ok.size() - 1)(rng)];
        apply(net, cfg, a);
        w.push_back(a);
    }
    return w;
}

inline TotalState random_loc_state(const std::vector<LocalGroup>& gs, std::mt19937_64& rng) {
    TotalState q;
    for (const auto& g : gs) q.push_back(g.states[std::uniform_int_distribution<std::size_t>(0, g.states.size() - 1)(rng)]);
    return q;
}

inline Vec random_vec(std::size_t n, std::int64_t lo, std::int64_t hi, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::int64_t> d(lo, hi);
    Vec v(n);
    for (auto& e : v) e = d(rng);
    return v;
}

// Every x in [0, hi]^n.
inline std::vector<Vec> box_vectors(std::size_t n, std::int64_t hi) {
    std::vector<Vec> out;
    Vec x(n, 0);
    while (true) {
        out.push_back(x);
        std::size_t i = 0;
        while (i < n && ++x[i] > hi) x[i++] = 0;
        if (i == n) break;
    }
    return out;
}

} // namespace support
