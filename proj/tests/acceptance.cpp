// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <unordered_map>

using namespace abelnet;
using namespace support;

namespace {

// Collects failed checks; an empty list means the criterion passed.
struct Checks {
    std::vector<std::string> failures;
    void operator()(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
};

int run(int id, const std::string& name, double limit_s, const std::function<void(Checks&)>& body) {
    Checks c;
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.failures.push_back(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > limit_s) {
        std::ostringstream os;
        os << "took " << secs << " s, limit " << limit_s << " s";
        c.failures.push_back(os.str());
    }
    bool ok = c.failures.empty();
    std::printf("%s %d %-44s %8.3f s (limit %g s)\n", ok ? "PASS" : "FAIL", id, name.c_str(), secs, limit_s);
    for (const auto& f : c.failures) std::printf("     - %s\n", f.c_str());
    std::fflush(stdout);
    return ok ? 0 : 1;
}

std::string str(const Vec& v) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    return os.str() + ')';
}

std::vector<Vec> vectors_with_total(std::size_t n, std::int64_t lo_total, std::int64_t hi_total) {
    std::vector<Vec> out;
    for (const auto& x : box_vectors(n, hi_total)) {
        auto t = std::accumulate(x.begin(), x.end(), std::int64_t{0});
        if (t >= lo_total && t <= hi_total) out.push_back(x);
    }
    return out;
}

bool divisors_are(const GroupInvariants& g, std::vector<int> d) {
    if (g.divisors.size() != d.size()) return false;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (g.divisors[i] != d[i]) return false;
    return true;
}

void toppling_groups(Checks& check) {
    auto c3 = bidirected_cycle(3);
    auto t3 = toppling_network(c3, {3, 3, 3});
    auto t2 = toppling_network(c3, {2, 2, 2});
    auto t1 = toppling_network(c3, {1, 1, 1});
    check(divisors_are(torsion_group(t3), {4, 4}), "t=3 torsion " + torsion_group(t3).to_string());
    check(divisors_are(torsion_group(t2), {3}), "t=2 torsion " + torsion_group(t2).to_string());
    auto g2 = grothendieck_invariants(t2);
    check(g2.free_rank == 1, "t=2 free rank " + std::to_string(g2.free_rank));
    check(divisors_are(torsion_group(t1), {2, 2}), "t=1 torsion " + torsion_group(t1).to_string());
}

void weight_table(Checks& check) {
    using Row = std::vector<std::uint64_t>;
    check(weight_class_counts(3, 3) == Row{26, 24, 24}, "n=3 row");
    check(weight_class_counts(4, 4) == Row{122, 120, 118, 120}, "n=4 row");
    check(weight_class_counts(5, 5, 4) == Row{642, 640, 640, 640, 640}, "n=5 row");
}

void determinant_identity(Checks& check) {
    for (std::size_t n : {3u, 4u}) {
        auto net = rotor_network(bidirected_cycle(n));
        auto det = series_determinant(net, 5);
        auto brute = series_bruteforce(net, 5, 4);
        check(det == brute, "C" + std::to_string(n) + ": " + std::to_string(det.mismatches(brute).size()) +
                                " mismatched coefficients");
    }
    auto u = series_determinant(rotor_network(bidirected_cycle(3)), 3).univariate();
    check(u[3] == 74, "z^3 coefficient on C3");
}

void burning_examples(Checks& check) {
    auto sp = sandpile_network(bidirected_cycle(3));
    Configuration c{{2, 1, 0}, {0, 0, 0}};
    auto cert = burning_test_critical(sp, c);
    check(cert.verdict, "(2,1,0).(0,0,0) not recurrent");
    check(letter_counts(sp, cert.witness) == Vec{2, 2, 2}, "witness " + str(letter_counts(sp, cert.witness)));
    check(is_legal(sp, c, cert.witness), "witness not legal");

    auto sink = sink_c3();
    TotalState q{0, 1, 1};
    check(burning_test_subcritical(sink, q, {2, 2, 2}), "sink network: q=(0,1,1) not recurrent");
    auto st = stabilize(sink, {{2, 0, 0}, q}, 1000);
    check(st.halted && st.cfg == Configuration{{0, 0, 0}, q}, "(2,0,0).q does not stabilize to 0.q");
}

void row_chip_firing_example(Checks& check) {
    auto net = row_chip_firing();
    auto P = production_matrix(net);
    RatMatrix want(2, 2);
    want(0, 1) = Rational(2, 3);
    want(1, 0) = Rational(3, 2);
    check(P == want, "P");
    check(exchange_rate(net) == Vec{3, 2}, "s = " + str(exchange_rate(net)));
    std::set<std::int64_t> levels;
    for (const auto& q : enumerate_loc(local_groups(net))) levels.insert(level(net, {{0, 0}, q}));
    check(levels == std::set<std::int64_t>{0, 2, 3, 4, 5, 7}, "state levels");
    auto cpt = network_capacity(net);
    check(cpt.status == CapacityStatus::Value && cpt.value == 7, "capacity " + std::to_string(cpt.value));
    check(stoppable_levels(net) == std::set<std::int64_t>{0, 1, 2, 3, 4, 5, 7}, "Stop");
}

void capacities(Checks& check) {
    auto expect = [&](const std::string& name, const Network& net, std::int64_t want) {
        auto c = network_capacity(net);
        check(c.status == CapacityStatus::Value && c.value == want,
              name + ": got " + std::to_string(c.value) + ", want " + std::to_string(want));
    };
    for (const auto& g : {bidirected_cycle(3), bidirected_cycle(4), complete_digraph(4)})
        expect("rotor", rotor_network(g), 0);
    auto c3 = bidirected_cycle(3);
    expect("sandpile C3", sandpile_network(c3), static_cast<std::int64_t>(c3.num_edges() - c3.size()));
    auto k4 = complete_digraph(4);
    expect("sandpile K4", sandpile_network(k4), static_cast<std::int64_t>(k4.num_edges() - k4.size()));
    for (const auto& [g, tau] : {std::pair{c3, std::vector<std::int64_t>{2, 1, 2}},
                                 std::pair{k4, std::vector<std::int64_t>{3, 2, 1, 3}}}) {
        std::int64_t sum = 0;
        for (auto t : tau) sum += t - 1;
        expect("height-arrow", height_arrow_network(g, tau), sum);
    }
}

void activity(Checks& check) {
    auto net = sandpile_network(bidirected_cycle(3));
    auto par = activity_vector(net, {{1, 1, 1}, {0, 1, 1}}, UpdateRule::parallel());
    check(par.rates == RatVec{1, 1, 1}, "parallel activity");
    auto sav = activity_vector(net, {{1, 1, 1}, {1, 1, 1}}, UpdateRule::savings({0}));
    RatVec two_thirds(3, Rational(2, 3));
    check(sav.rates == two_thirds, "savings {v0} activity");
    auto rep = check_H1_H2(UpdateRule::savings({0, 1}), net);
    check(!rep.h2.empty(), "no H2 violation for savings {v0,v1}");
    if (!rep.h2.empty()) {
        const auto& v = rep.h2.front();
        Updater u(net, UpdateRule::savings({0, 1}));
        auto lhs = letter_counts(net, u(v.cfg));
        auto rhs = letter_counts(net, u(v.after));
        rhs[v.a] += 1;
        check(!leq(lhs, rhs), "reported H2 violation does not replay");
    }
}

void properties(Checks& check) {
    std::mt19937_64 rng(2024);
    auto zoo = critical_zoo();
    zoo.push_back({"sink C3", sink_c3()});
    std::size_t bad = 0;

    // abelian property: shuffled words reach the same configuration
    for (const auto& [name, net] : zoo) {
        auto gs = local_groups(net);
        for (int t = 0; t < 200; ++t) {
            Configuration c{random_vec(net.num_letters(), -1, 3, rng), random_loc_state(gs, rng)};
            auto u = random_word(net, 12, rng);
            auto v = u;
            std::shuffle(v.begin(), v.end(), rng);
            bad += !(execute_word(net, c, u).cfg == execute_word(net, c, v).cfg);
        }
    }
    check(bad == 0, "abelian: " + std::to_string(bad) + " violations");

    // removal
    bad = 0;
    for (const auto& [name, net] : zoo) {
        auto gs = local_groups(net);
        for (int t = 0; t < 100; ++t) {
            Configuration c{random_vec(net.num_letters(), 0, 3, rng), random_loc_state(gs, rng)};
            auto w = random_legal_word(net, c, 12, rng);
            auto n = random_vec(net.num_letters(), 0, 3, rng);
            bad += !is_legal(net, execute_vector(net, c, n), remove(w, n));
        }
    }
    check(bad == 0, "removal: " + std::to_string(bad) + " violations");

    // least action against halting stabilizations
    bad = 0;
    for (const auto& net : {sink_c3(), toppling_network(bidirected_cycle(3), {3, 3, 3}),
                            sandpile_network(bidirected_cycle(3))}) {
        for (int t = 0; t < 200; ++t) {
            Configuration c{random_vec(3, -1, 4, rng), TotalState(3, 0)};
            auto st = stabilize(net, c, 10000);
            if (!st.halted) continue;
            auto cw = letter_counts(net, st.trace);
            for (int k = 0; k < 5; ++k) bad += !leq(letter_counts(net, random_legal_word(net, c, 50, rng)), cw);
        }
    }
    check(bad == 0, "least action: " + std::to_string(bad) + " violations");

    // exchange join: every pair of legal words of length <= 3
    bad = 0;
    {
        auto net = sandpile_network(bidirected_cycle(3));
        Configuration c{{3, 1, 2}, {0, 1, 0}};
        std::vector<Word> legal;
        std::function<void(Word&, const Configuration&)> grow = [&](Word& w, const Configuration& cur) {
            legal.push_back(w);
            if (w.size() == 3) return;
            for (Letter a = 0; a < 3; ++a) {
                if (cur.x[a] < 1) continue;
                w.push_back(a);
                grow(w, step(net, cur, a));
                w.pop_back();
            }
        };
        Word w0;
        grow(w0, c);
        for (const auto& w1 : legal)
            for (const auto& w2 : legal) {
                Word joined = w1;
                auto ext = exchange_join(net, c, w1, w2);
                joined.insert(joined.end(), ext.begin(), ext.end());
                auto n1 = letter_counts(net, w1), n2 = letter_counts(net, w2), nj = letter_counts(net, joined);
                bool ok = is_legal(net, c, joined);
                for (Letter a = 0; a < 3; ++a) ok = ok && nj[a] == std::max(n1[a], n2[a]);
                bad += !ok;
            }
    }
    check(bad == 0, "exchange join: " + std::to_string(bad) + " violations");

    // cycle test against burning test, exhaustive up to 3 chips on C3
    bad = 0;
    for (const auto& net : {rotor_network(bidirected_cycle(3)), inverse_c3()}) {
        CycleTester ct(net);
        auto r = period_vector(net);
        for (const auto& q : enumerate_loc(ct.groups()))
            for (const auto& x : vectors_with_total(net.num_letters(), 0, 3)) {
                Configuration c{x, q};
                bad += ct(c) != burning_test_critical(net, c, r).verdict;
            }
    }
    check(bad == 0, "cycle test vs burning test: " + std::to_string(bad) + " disagreements");

    // balance on 10,000 random executions
    bad = 0;
    std::size_t runs = 0;
    auto crit = critical_zoo();
    std::size_t per = 10000 / crit.size() + 1;
    for (const auto& [name, net] : crit) {
        BalanceChecker bc(net);
        auto gs = local_groups(net);
        for (std::size_t t = 0; t < per; ++t) {
            Configuration c{random_vec(net.num_letters(), 0, 3, rng), random_loc_state(gs, rng)};
            auto w = random_legal_word(net, c, 1 + t % 60, rng);
            auto rep = bc(c, execute_word(net, c, w).cfg, w);
            bad += !(rep.ok && rep.equality_ok);
            ++runs;
        }
    }
    check(runs >= 10000, "only " + std::to_string(runs) + " balance runs");
    check(bad == 0, "balance: " + std::to_string(bad) + " violations");

    // level conservation along legal executions
    bad = 0;
    for (const auto& [name, net] : crit) {
        auto d = critical_data(net);
        auto lt = level_table(net, d);
        auto lvl = [&](const Configuration& c) {
            std::int64_t s = lt.rel_of(c.q);
            for (std::size_t a = 0; a < c.x.size(); ++a) s += d.s[a] * c.x[a];
            return s;
        };
        for (int t = 0; t < 200; ++t) {
            Configuration c{random_vec(net.num_letters(), 0, 3, rng), random_loc_state(d.groups, rng)};
            auto w = random_legal_word(net, c, 40, rng);
            bad += lvl(c) != lvl(execute_word(net, c, w).cfg);
        }
    }
    check(bad == 0, "level conservation: " + std::to_string(bad) + " violations");
}

// Recurrent rotor configurations with m chips, grouped by legal single steps.
std::size_t classes_by_union_find(const Network& net, std::int64_t m) {
    auto r = period_vector(net);
    std::unordered_map<Configuration, std::size_t, ConfigurationHash> id;
    std::vector<Configuration> rec;
    for (const auto& q : enumerate_loc(local_groups(net)))
        for (const auto& x : vectors_with_total(net.num_letters(), m, m)) {
            Configuration c{x, q};
            if (burning_test_critical(net, c, r).verdict) {
                id.emplace(c, rec.size());
                rec.push_back(c);
            }
        }
    std::vector<std::size_t> parent(rec.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
        return parent[i] == i ? i : parent[i] = find(parent[i]);
    };
    for (std::size_t i = 0; i < rec.size(); ++i)
        for (Letter a = 0; a < net.num_letters(); ++a) {
            if (rec[i].x[a] < 1) continue;
            auto it = id.find(step(net, rec[i], a));
            if (it != id.end()) parent[find(i)] = find(it->second);
        }
    std::size_t classes = 0;
    for (std::size_t i = 0; i < rec.size(); ++i) classes += find(i) == i;
    return classes;
}

void components(Checks& check) {
    auto net = rotor_network(bidirected_cycle(3));
    auto tor = torsion_group(net).torsion_order();
    check(tor == 3, "torsion order " + tor.str());
    for (std::int64_t m = 1; m <= 4; ++m) {
        auto cc = components_per_level(net, m);
        auto brute = classes_by_union_find(net, m);
        auto ms = std::to_string(m);
        check(cc.complete, "m=" + ms + ": search budget ran out");
        check(cc.classes == 3, "m=" + ms + ": " + std::to_string(cc.classes) + " classes");
        check(brute == 3, "m=" + ms + ": partition gives " + std::to_string(brute));
        check(cc.tor_prediction && *cc.tor_prediction == tor, "m=" + ms + ": prediction");
    }
}

} // namespace

int main() {
    int failed = 0;
    failed += run(1, "toppling groups on C3", 1, toppling_groups);
    failed += run(2, "rotor weight-class table n<=5", 30, weight_table);
    failed += run(3, "determinant series = brute force", 60, determinant_identity);
    failed += run(4, "burning test examples", 1, burning_examples);
    failed += run(5, "row chip-firing P, s, levels, Stop", 1, row_chip_firing_example);
    failed += run(6, "capacity closed forms", 10, capacities);
    failed += run(7, "activity and H2 counterexample", 1, activity);
    failed += run(8, "property suites", 300, properties);
    failed += run(9, "components per level vs torsion order", 60, components);
    std::printf("%d of 9 criteria failed\n", failed);
    return failed == 0 ? 0 : 1;
}
