// abelnet: command-line front end for the abelnet library.
#include "abelnet/abelnet.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <iostream>

using namespace abelnet;

namespace {

struct Options {
    std::string file;
    std::string format = "text";
    int maxdeg = 5;
    std::string mode = "det";
    bool univariate = false;
    std::string rule = "parallel";
    std::string savings_set;
    std::string order;
    std::size_t steps = 100000;
    std::string report = "activity";
    std::int64_t box = 0;
    unsigned jobs = 0;
    std::string x, q, k;
};

std::vector<std::string> split(const std::string& s, char sep = ',') {
    std::vector<std::string> out;
    if (s.empty()) return out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::int64_t parse_int(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        auto v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw Error(Errc::ParseError, what + ": not an integer '" + s + "'");
    }
}

Vec parse_vec(const std::string& s, std::size_t n, const std::string& what) {
    Vec v;
    for (const auto& t : split(s)) v.push_back(parse_int(t, what));
    if (v.size() != n) throw Error(Errc::ParseError, what + ": expected " + std::to_string(n) + " entries");
    return v;
}

// States by index or by name.
TotalState parse_state(const Network& net, const std::string& s) {
    auto parts = split(s);
    if (parts.size() != net.num_vertices())
        throw Error(Errc::ParseError, "--q: expected " + std::to_string(net.num_vertices()) + " entries");
    TotalState q;
    for (std::size_t v = 0; v < parts.size(); ++v) {
        const auto& names = net.processors[v].state_names;
        auto it = std::find(names.begin(), names.end(), parts[v]);
        if (it != names.end()) {
            q.push_back(static_cast<State>(it - names.begin()));
            continue;
        }
        auto k = parse_int(parts[v], "--q");
        if (k < 0 || static_cast<std::size_t>(k) >= names.size())
            throw Error(Errc::ParseError, "--q: state out of range at " + net.graph.name(v));
        q.push_back(static_cast<State>(k));
    }
    return q;
}

std::vector<Vertex> parse_vertices(const Network& net, const std::string& s) {
    std::vector<Vertex> out;
    for (const auto& t : split(s)) {
        auto v = net.graph.find(t);
        if (v >= net.num_vertices()) throw Error(Errc::ParseError, "unknown vertex '" + t + "'");
        out.push_back(v);
    }
    return out;
}

std::string state_string(const Network& net, const TotalState& q) {
    std::vector<std::string> parts;
    for (std::size_t v = 0; v < q.size(); ++v) parts.push_back(net.processors[v].state_names[q[v]]);
    return join(parts, ",");
}

std::string config_string(const Network& net, const Configuration& c) {
    return "x=(" + join(c.x, ",") + ") q=(" + state_string(net, c.q) + ")";
}

std::string rat_list(const RatVec& v) {
    std::vector<std::string> parts;
    for (const auto& e : v) parts.push_back(to_string(e));
    return join(parts, ",");
}

// key/value output in either format
class Printer {
public:
    explicit Printer(bool tsv) : tsv_(tsv) {
        if (tsv_) std::cout << "key\tvalue\n";
    }
    void operator()(const std::string& key, const std::string& value) const {
        if (tsv_)
            std::cout << key << '\t' << value << '\n';
        else
            std::cout << key << ": " << value << '\n';
    }

private:
    bool tsv_;
};

int cmd_validate(const Options& o) {
    auto net = load_network(o.file);
    auto rep = validate_abelian(net);
    Printer out(o.format == "tsv");
    out("letters", std::to_string(net.num_letters()));
    out("abelian", rep.ok() ? "yes" : "no");
    for (const auto& v : rep.violations) {
        const char* kind = v.kind == Violation::Transition ? "transition"
                           : v.kind == Violation::Message  ? "message"
                                                           : "non-neighbour";
        out("violation", std::string(kind) + " vertex=" + net.graph.name(v.vertex) + " state=" +
                             net.processors[v.vertex].state_names[v.q] + " letters=" + net.letter_names[v.a] +
                             "," + net.letter_names[v.b]);
    }
    return rep.ok() ? 0 : 1;
}

int cmd_invariants(const Options& o) {
    auto net = load_network(o.file);
    Printer out(o.format == "tsv");
    auto P = production_matrix(net);
    auto nc = classify(P);
    out("letters", join(net.letter_names, ","));
    out("class", criticality_name(nc.overall));
    out("strongly_connected", nc.strongly_connected ? "yes" : "no");
    for (std::size_t i = 0; i < P.rows(); ++i) {
        std::vector<std::string> row;
        for (std::size_t j = 0; j < P.cols(); ++j) row.push_back(to_string(P(i, j)));
        out("P[" + net.letter_names[i] + "]", join(row, " "));
    }
    out("|Z^A/K|", to_string(total_kernel(net).index()));
    out("grothendieck", grothendieck_invariants(net).to_string());
    out("torsion", torsion_group(net).to_string());
    if (nc.strongly_connected && nc.overall == Criticality::Critical) {
        out("r", join(period_vector(net), ","));
        out("s", join(exchange_rate(net), ","));
        auto c = network_capacity(net, o.box);
        out("capacity", std::to_string(c.value) + (c.status == CapacityStatus::BoxTooSmall ? " (box too small)" : ""));
        if (c.status == CapacityStatus::Value) {
            std::vector<std::string> stop;
            for (auto v : stoppable_levels(net)) stop.push_back(std::to_string(v));
            out("Stop", "{" + join(stop, ",") + "}");
        }
    } else if (nc.strongly_connected && nc.overall == Criticality::Subcritical) {
        out("capacity", "unbounded");
    }
    return 0;
}

int cmd_recurrent(const Options& o) {
    auto net = load_network(o.file);
    Printer out(o.format == "tsv");
    auto nc = classify(net);
    if (o.q.empty()) throw Error(Errc::ParseError, "--q is required");
    auto q = parse_state(net, o.q);
    if (nc.overall == Criticality::Subcritical) {
        Vec k;
        if (o.k.empty()) {
            k = letter_orders(net, local_groups(net));
        } else {
            k = parse_vec(o.k, net.num_letters(), "--k");
        }
        bool rec = burning_test_subcritical(net, q, k);
        out("test", "subcritical burning");
        out("k", join(k, ","));
        out("recurrent", rec ? "yes" : "no");
        return rec ? 0 : 1;
    }
    if (!nc.strongly_connected || nc.overall != Criticality::Critical)
        throw Error(Errc::NotCritical, "recurrence tests need a subcritical or a strongly connected critical network");
    if (o.x.empty()) throw Error(Errc::ParseError, "--x is required");
    Configuration cfg{parse_vec(o.x, net.num_letters(), "--x"), q};
    auto cert = burning_test_critical(net, cfg);
    out("test", "burning");
    out("config", config_string(net, cfg));
    out("witness", word_string(net, cert.witness));
    out("|w|", join(letter_counts(net, cert.witness), ","));
    out("r", join(period_vector(net), ","));
    out("state_returned", cert.state_returned ? "yes" : "no");
    if (is_agent(net)) out("cycle_test", cycle_test(net, cfg) ? "yes" : "no");
    out("recurrent", cert.verdict ? "yes" : "no");
    return cert.verdict ? 0 : 1;
}

int cmd_series(const Options& o) {
    auto net = load_network(o.file);
    bool tsv = o.format == "tsv";
    SeriesTable det, brute;
    if (o.mode == "det" || o.mode == "both") det = series_determinant(net, o.maxdeg);
    if (o.mode == "brute" || o.mode == "both") brute = series_bruteforce(net, o.maxdeg, o.jobs);
    const SeriesTable& shown = o.mode == "brute" ? brute : det;
    if (o.univariate) {
        auto u = shown.univariate();
        if (tsv) std::cout << "degree\tcoeff\n";
        for (std::size_t d = 0; d < u.size(); ++d)
            if (tsv)
                std::cout << d << '\t' << u[d] << '\n';
            else
                std::cout << "z^" << d << " : " << u[d] << '\n';
    } else {
        std::cout << (tsv ? shown.to_tsv(net.letter_names) : shown.to_text());
    }
    if (o.mode == "both") {
        auto bad = det.mismatches(brute);
        for (const auto& e : bad)
            std::cerr << "mismatch at (" << join(std::vector<int>(e.begin(), e.end()), ",") << "): det " << det[e]
                      << " brute " << brute[e] << '\n';
        if (!bad.empty()) return 1;
    }
    return 0;
}

int cmd_simulate(const Options& o) {
    auto net = load_network(o.file);
    bool tsv = o.format == "tsv";
    if (o.x.empty() || o.q.empty()) throw Error(Errc::ParseError, "--x and --q are required");
    Configuration cfg{parse_vec(o.x, net.num_letters(), "--x"), parse_state(net, o.q)};
    UpdateRule rule;
    if (o.rule == "parallel") {
        rule = UpdateRule::parallel();
    } else if (o.rule == "sequential") {
        rule = UpdateRule::sequential(parse_vertices(net, o.order));
    } else {
        auto S = parse_vertices(net, o.savings_set);
        rule = UpdateRule::savings(std::set<Vertex>(S.begin(), S.end()));
    }
    if (o.report == "orbit") {
        Updater u(net, rule);
        if (tsv) std::cout << "t\tx\tq\tword\n";
        Configuration cur = cfg;
        for (std::size_t t = 0; t < o.steps; ++t) {
            auto w = u(cur);
            if (tsv)
                std::cout << t << '\t' << join(cur.x, ",") << '\t' << state_string(net, cur.q) << '\t'
                          << word_string(net, w) << '\n';
            else
                std::cout << t << ": " << config_string(net, cur) << " [" << word_string(net, w) << "]\n";
            if (w.empty()) break;
            cur = execute_word(net, cur, w).cfg;
        }
        return 0;
    }
    auto a = activity_vector(net, cfg, rule, o.steps);
    Printer out(tsv);
    out("rule", o.rule);
    out("transient", std::to_string(a.transient));
    out("period", std::to_string(a.period));
    out("activity", rat_list(a.rates));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"abelnet: abelian network toolkit"};
    app.require_subcommand(1);
    Options o;
    if (const char* env = std::getenv("ABELNET_JOBS")) {
        try {
            o.jobs = static_cast<unsigned>(std::stoul(env));
        } catch (const std::exception&) {
        }
    }
    auto common = [&](CLI::App* c) {
        c->add_option("file", o.file, "network file")->required();
        c->add_option("--format", o.format, "text or tsv")->check(CLI::IsMember({"text", "tsv"}));
        c->add_option("--jobs", o.jobs, "worker threads (env ABELNET_JOBS)");
    };
    auto* validate = app.add_subcommand("validate", "check the abelian property");
    common(validate);
    auto* invariants = app.add_subcommand("invariants", "class, P, r, s, groups, capacity, Stop");
    common(invariants);
    invariants->add_option("--box", o.box, "capacity search box");
    auto* recurrent = app.add_subcommand("recurrent", "recurrence test for a configuration or state");
    common(recurrent);
    recurrent->add_option("--x", o.x, "letter counts, comma separated");
    recurrent->add_option("--q", o.q, "states by index or name, comma separated");
    recurrent->add_option("--k", o.k, "subcritical witness vector");
    auto* series = app.add_subcommand("series", "generating function of recurrent configurations");
    common(series);
    series->add_option("--maxdeg", o.maxdeg, "total degree truncation")->check(CLI::NonNegativeNumber);
    series->add_option("--mode", o.mode, "det, brute or both")->check(CLI::IsMember({"det", "brute", "both"}));
    series->add_flag("--univariate", o.univariate, "set every variable to z");
    auto* simulate = app.add_subcommand("simulate", "run an update rule");
    common(simulate);
    simulate->add_option("--x", o.x, "letter counts");
    simulate->add_option("--q", o.q, "states");
    simulate->add_option("--rule", o.rule, "parallel, sequential or savings")
        ->check(CLI::IsMember({"parallel", "sequential", "savings"}));
    simulate->add_option("--S", o.savings_set, "savings set, vertex names");
    simulate->add_option("--order", o.order, "sequential vertex order");
    simulate->add_option("--steps", o.steps, "step cap");
    simulate->add_option("--report", o.report, "activity or orbit")->check(CLI::IsMember({"activity", "orbit"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    if (o.jobs == 0) o.jobs = 1;
    try {
        if (*validate) return cmd_validate(o);
        if (*invariants) return cmd_invariants(o);
        if (*recurrent) return cmd_recurrent(o);
        if (*series) return cmd_series(o);
        if (*simulate) return cmd_simulate(o);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code() == Errc::OrbitCapExceeded ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
