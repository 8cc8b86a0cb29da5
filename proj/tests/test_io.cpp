#include "catch_amalgamated.hpp"

#include "abelnet/abelnet.hpp"
#include "support.hpp"

#include <filesystem>

using namespace abelnet;

namespace {

const std::string data_dir = ABELNET_DATA_DIR;

std::string data(const std::string& name) { return data_dir + "/" + name; }

Errc parse_code(const std::string& text) {
    try {
        parse_network(text);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error for " << text);
    return Errc::ParseError;
}

std::string parse_message(const std::string& text) {
    try {
        parse_network(text);
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

std::vector<NetworkSpec> sample_specs() {
    std::vector<NetworkSpec> out;
    auto c3 = bidirected_cycle(3);
    auto add = [&](Family f, auto&& fill) {
        NetworkSpec s;
        s.family = f;
        s.graph = c3;
        fill(s);
        out.push_back(s);
    };
    add(Family::Rotor, [](NetworkSpec&) {});
    add(Family::Sandpile, [](NetworkSpec&) {});
    add(Family::BranchingRotor, [](NetworkSpec&) {});
    add(Family::HeightArrow, [](NetworkSpec& s) { s.tau = {2, 1, 2}; });
    add(Family::HeightArrowSinked, [](NetworkSpec& s) {
        s.tau = {2, 2, 2};
        s.sinks = {0};
    });
    add(Family::Toppling, [](NetworkSpec& s) { s.thresholds = {3, 2, 1}; });
    add(Family::Arithmetical, [](NetworkSpec& s) {
        s.D = {1, 3, 3};
        s.b = {2, 1, 1};
    });
    add(Family::Inverse, [](NetworkSpec& s) {
        for (Vertex v = 0; v < 3; ++v) {
            Letter a = 2 * ((v + 1) % 3);
            s.inverse.m.push_back(4);
            s.inverse.c.push_back(a);
            s.inverse.d.push_back(a + 1);
            s.inverse.x.push_back({a, a + 1, a, a + 1});
        }
    });
    out.push_back(row_chip_firing_spec(support::two_vertex_multigraph()));
    return out;
}

} // namespace

TEST_CASE("builtin specs survive a round trip", "[io]") {
    for (const auto& spec : sample_specs()) {
        INFO(family_name(spec.family));
        auto net = build(spec);
        auto text = to_json(spec).dump();
        auto back = parse_network(text);
        CHECK(back.family == spec.family);
        CHECK(build(back) == net);
        // writing again gives the same bytes
        CHECK(to_json(back).dump() == text);
    }
}

TEST_CASE("explicit export reproduces every network", "[io]") {
    std::vector<Network> nets;
    for (const auto& spec : sample_specs()) nets.push_back(build(spec));
    nets.push_back(support::no_gap_network());
    nets.push_back(support::inverse_loop7());
    nets.push_back(thief(support::inverse_c3(), std::set<Letter>{0, 3}));
    for (const auto& net : nets) {
        auto text = export_network(net);
        CHECK(text.back() == '\n');
        auto spec = parse_network(text);
        CHECK(spec.family == Family::Explicit);
        auto back = build(spec);
        CHECK(back == net);
        CHECK(export_network(back) == text);
    }
}

TEST_CASE("explicit spec without tables is rejected", "[io]") {
    NetworkSpec s;
    s.family = Family::Explicit;
    s.graph = bidirected_cycle(3);
    CHECK_THROWS_MATCHES(to_json(s), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == Errc::InvalidSpec;
                         }));
    CHECK_THROWS_AS(build(s), Error);
}

TEST_CASE("example files load", "[io][examples]") {
    std::size_t seen = 0;
    for (const auto& entry : std::filesystem::directory_iterator(data_dir)) {
        auto name = entry.path().filename().string();
        if (entry.path().extension() != ".json") continue;
        ++seen;
        INFO(name);
        if (name == "malformed.json") {
            CHECK_THROWS_MATCHES(load_network(entry.path().string()), Error,
                                 Catch::Matchers::Predicate<Error>(
                                     [](const Error& e) { return e.code() == Errc::ParseError; }));
            continue;
        }
        auto net = load_network(entry.path().string());
        CHECK(net.num_letters() > 0);
        bool ok = validate_abelian(net).ok();
        CHECK(ok == (name != "inverse_c3_mutated.json"));
    }
    CHECK(seen == 14);
}

TEST_CASE("example files match the builders", "[io][examples]") {
    auto c3 = bidirected_cycle(3);
    CHECK(load_network(data("rotor_c3.json")) == rotor_network(c3));
    CHECK(load_network(data("rotor_c4.json")) == rotor_network(bidirected_cycle(4)));
    CHECK(load_network(data("sandpile_c3.json")) == sandpile_network(c3));
    CHECK(load_network(data("sink_c3.json")) == support::sink_c3());
    CHECK(load_network(data("inverse_c3.json")) == support::inverse_c3());
    CHECK(load_network(data("no_gap.json")) == support::no_gap_network());
    CHECK(load_network(data("row_chip_firing.json")) == support::row_chip_firing());
    for (std::int64_t t = 1; t <= 3; ++t)
        CHECK(load_network(data("toppling_c3_t" + std::to_string(t) + ".json")) ==
              toppling_network(c3, {t, t, t}));
    CHECK(load_network(data("height_arrow_c3.json")) == height_arrow_network(c3, {2, 1, 2}));
    CHECK(load_network(data("arithmetical_c3.json")) == arithmetical_network(c3, {1, 3, 3}, {2, 1, 1}));
}

TEST_CASE("mutated inverse file breaks the message condition", "[io][examples]") {
    auto net = load_network(data("inverse_c3_mutated.json"));
    auto rep = validate_abelian(net);
    REQUIRE_FALSE(rep.ok());
    for (const auto& v : rep.violations) CHECK(v.kind == Violation::Message);
}

TEST_CASE("parse errors name the offending field", "[io]") {
    const std::string g = R"("digraph":{"vertices":["v0","v1"],"edges":[["v0","v1"],["v1","v0"]]})";
    CHECK(parse_code("{") == Errc::ParseError);
    CHECK(parse_code("[]") == Errc::ParseError);
    CHECK_THAT(parse_message("{" + g + "}"), Catch::Matchers::ContainsSubstring("$: missing field 'kind'"));
    CHECK_THAT(parse_message(R"({"kind":"x",)" + g + "}"), Catch::Matchers::ContainsSubstring("$.kind"));
    CHECK_THAT(parse_message(R"({"kind":"builtin","family":"nope",)" + g + "}"),
               Catch::Matchers::ContainsSubstring("$.family"));
    CHECK_THAT(parse_message(R"({"kind":"builtin","family":"toppling",)" + g + "}"),
               Catch::Matchers::ContainsSubstring("$.params: missing field 't'"));
    CHECK_THAT(parse_message(R"({"kind":"builtin","family":"toppling","params":{"t":[1,"a"]},)" + g + "}"),
               Catch::Matchers::ContainsSubstring("$.params.t[1]"));
    CHECK_THAT(parse_message(R"({"kind":"builtin","family":"rotor","digraph":{"vertices":["v0"],"edges":[["v0","v9"]]}})"),
               Catch::Matchers::ContainsSubstring("$.digraph.edges[0][1]: unknown vertex 'v9'"));
    CHECK_THAT(parse_message(R"({"kind":"builtin","family":"rotor","digraph":{"vertices":["v0","v0"],"edges":[]}})"),
               Catch::Matchers::ContainsSubstring("$.digraph.vertices[1]: duplicate"));
    CHECK_THAT(parse_message(R"({"kind":"builtin","family":"height_arrow_sinked","params":{"tau":[1,1],"sinks":["w"]},)" +
                             g + "}"),
               Catch::Matchers::ContainsSubstring("$.params.sinks[0]"));
    CHECK_THAT(parse_message(R"({"kind":"explicit",)" + g + "}"),
               Catch::Matchers::ContainsSubstring("$: missing field 'processors'"));
}

TEST_CASE("explicit table errors", "[io]") {
    auto j = to_json(support::no_gap_network());
    auto broken = j;
    broken["processors"][0]["next"][0][0] = "zz";
    CHECK(parse_code(broken.dump()) == Errc::ParseError);
    broken = j;
    broken["processors"][0]["emit"][0][0] = json::array({json::array({"nope", 1})});
    CHECK(parse_code(broken.dump()) == Errc::ParseError);
    broken = j;
    broken["processors"].erase(1);
    CHECK_THAT(parse_message(broken.dump()), Catch::Matchers::ContainsSubstring("$.processors"));
}

TEST_CASE("missing file reports the path", "[io]") {
    try {
        load_network(data("does_not_exist.json"));
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ParseError);
        CHECK_THAT(std::string(e.what()), Catch::Matchers::ContainsSubstring("does_not_exist.json"));
    }
}

TEST_CASE("series tables print deterministically", "[io][series]") {
    auto net = rotor_network(bidirected_cycle(3));
    auto a = series_determinant(net, 3);
    auto b = series_determinant(net, 3);
    CHECK(a.to_text() == b.to_text());
    CHECK(a.to_tsv(net.letter_names) == b.to_tsv(net.letter_names));

    SeriesTable t;
    t.nvars = 2;
    t.maxdeg = 2;
    t.add({1, 1}, 5);
    t.add({0, 1}, 2);
    t.add({2, 0}, -1);
    t.add({1, 0}, 3);
    t.add({0, 0}, 1);
    t.add({3, 0}, 9);  // above the truncation, dropped
    t.add({1, 0}, -3); // cancels to zero, removed
    CHECK(t.to_text() == "(0,0) : 1\n(0,1) : 2\n(1,1) : 5\n(2,0) : -1\n");
    CHECK(t.to_tsv({"x", "y"}) == "x\ty\tcoeff\n0\t0\t1\n0\t1\t2\n1\t1\t5\n2\t0\t-1\n");
    CHECK(t.univariate() == std::vector<BigInt>{1, 2, 4});
}
