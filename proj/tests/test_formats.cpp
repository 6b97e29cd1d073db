#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "reconfig/runner.hpp"

#include "generators.hpp"
#include "oracles.hpp"

using namespace reconfig;

namespace {

Envelope ncl_envelope() {
    auto g = gen::two_or_three_blue();
    return Envelope{"ncl", NclPack{g, Orientation{{1, 1, 0}}, Orientation{{0, 0, 1}}}};
}

Envelope formula_envelope() {
    Formula f({"x", "y", "z"}, {{{0}, {1}, {2}}}, FormulaSemantics::Nae);
    return Envelope{"naesat", FormulaPack{f, {1, 0, 0}, {0, 1, 0}}};
}

Envelope tokens_envelope() {
    auto inst = gen::token_instance(gen::prism(), 1);  // one token: one component
    return Envelope{"tokens", TokensPack{inst}};
}

Envelope exactcover_envelope() {
    ExactCoverInstance inst;
    inst.universe = {"a", "b", "c"};
    inst.family = {{0}, {1}, {2}, {0, 1, 2}};
    inst.start_cover = {3};
    inst.goal_cover = {0, 1, 2};
    return Envelope{"exactcover", ExactCoverPack{inst, CoverMoveKind::ManyWay}};
}

Envelope subsetsum_envelope() {
    SubsetSumInstance inst;
    inst.values = {1, 2, 3, BigInt("123456789012345678901234567890")};
    inst.target = 3;
    inst.start_set = {2};
    inst.goal_set = {0, 1};
    return Envelope{"subsetsum", SubsetSumPack{inst, 3}};
}

Envelope hypercube_envelope() {
    PolytopeInstance p;
    p.n = 3;
    p.d = 1;
    p.columns = {{1}, {1}, {1}};
    p.lower = {2};
    p.upper = {3};
    p.start = {1, 1, 0};
    p.goal = {0, 1, 1};
    return Envelope{"hypercube", HypercubePack{p}};
}

std::vector<Envelope> all_envelopes() {
    return {ncl_envelope(),        formula_envelope(),   tokens_envelope(),
            exactcover_envelope(), subsetsum_envelope(), hypercube_envelope()};
}

}  // namespace

TEST_CASE("envelope round-trip: parse(serialize(x)) == x") {
    for (const auto& env : all_envelopes()) {
        json j = serialize_envelope(env);
        Envelope back = parse_envelope(j);
        REQUIRE(back.problem == env.problem);
        REQUIRE(serialize_envelope(back) == j);
        // digest is a pure function of the canonical serialization
        REQUIRE(envelope_digest(back) == envelope_digest(env));
    }
}

TEST_CASE("verify_envelope accepts the fixtures and rejects infeasible endpoints") {
    for (const auto& env : all_envelopes()) REQUIRE_NOTHROW(verify_envelope(env));

    SECTION("unsatisfying start assignment") {
        Envelope env = formula_envelope();
        std::get<FormulaPack>(env.payload).start = {1, 1, 1};
        REQUIRE_THROWS_AS(verify_envelope(env), Error);
    }
    SECTION("illegal ncl orientation") {
        Envelope env = ncl_envelope();
        std::get<NclPack>(env.payload).goal = Orientation{{1, 1, 1}};
        REQUIRE_THROWS_AS(verify_envelope(env), Error);
    }
    SECTION("cover with double coverage") {
        Envelope env = exactcover_envelope();
        std::get<ExactCoverPack>(env.payload).instance.goal_cover = {0, 3};
        REQUIRE_THROWS_AS(verify_envelope(env), Error);
    }
    SECTION("selection off target") {
        Envelope env = subsetsum_envelope();
        std::get<SubsetSumPack>(env.payload).instance.goal_set = {3};
        REQUIRE_THROWS_AS(verify_envelope(env), Error);
    }
}

TEST_CASE("envelope parse errors carry diagnostics") {
    REQUIRE_THROWS_AS(parse_envelope(json::parse("[1,2]")), Error);
    REQUIRE_THROWS_AS(parse_envelope(json{{"problem", "ncl"}}), Error);  // missing fields
    json j = serialize_envelope(ncl_envelope());
    j["problem"] = "sudoku";
    REQUIRE_THROWS_AS(parse_envelope(j), Error);
    json k = serialize_envelope(subsetsum_envelope());
    k["data"]["values"][0] = "007";  // non-canonical decimal
    REQUIRE_THROWS_AS(parse_envelope(k), Error);
}

TEST_CASE("solve / certificate / check round-trip per model") {
    for (const auto& env : all_envelopes()) {
        auto outcome = solve_envelope(env, {});
        INFO("problem " << env.problem);
        REQUIRE(outcome.reachable);
        REQUIRE(outcome.certificate.has_value());
        std::string diag;
        REQUIRE(check_certificate_file(env, *outcome.certificate, &diag));

        // serialization round-trip of the certificate file
        auto parsed = parse_certificate(serialize_certificate(*outcome.certificate));
        REQUIRE(check_certificate_file(env, parsed, &diag));

        // digest binding: the same certificate against another instance fails
        for (const auto& other : all_envelopes()) {
            if (other.problem == env.problem) continue;
            REQUIRE_FALSE(check_certificate_file(other, parsed, &diag));
        }
    }
}

TEST_CASE("tampered certificates are rejected") {
    Envelope env = formula_envelope();
    auto outcome = solve_envelope(env, {});
    REQUIRE(outcome.reachable);
    CertificateFile cert = *outcome.certificate;
    SECTION("an edited intermediate step breaks the move relation") {
        REQUIRE(cert.configurations.size() >= 2);
        cert.configurations.insert(cert.configurations.begin() + 1,
                                   json{{"x", false}, {"y", false}, {"z", true}});
        std::string diag;
        REQUIRE_FALSE(check_certificate_file(env, cert, &diag));
    }
    SECTION("a wrong digest is rejected before replay") {
        cert.instance_digest = "0000000000000000";
        std::string diag;
        REQUIRE_FALSE(check_certificate_file(env, cert, &diag));
        REQUIRE(diag.find("digest") != std::string::npos);
    }
}

TEST_CASE("unreachable and capped solves") {
    SECTION("rigid gadget: goal differs from the isolated canonical start") {
        auto rigid = compile_rigid_gadget("r");
        std::vector<std::vector<Literal>> clauses;
        for (const auto& c : rigid.clauses)
            clauses.push_back({Literal{c[0]}, Literal{c[1]}, Literal{c[2]}});
        Formula f({rigid.variable_names.begin(), rigid.variable_names.end()}, clauses,
                  FormulaSemantics::Nae);
        Envelope env{"naesat", FormulaPack{f, {1, 0, 0, 1}, {0, 1, 1, 0}}};
        auto outcome = solve_envelope(env, {});
        REQUIRE_FALSE(outcome.reachable);
        REQUIRE(outcome.states_explored == 1);
    }
    SECTION("a one-state cap trips on any non-trivial search") {
        try {
            solve_envelope(ncl_envelope(), {1, 1000});
            FAIL("expected ResourceCapExceeded");
        } catch (const Error& e) {
            REQUIRE(e.code() == Errc::resource_cap);
        }
    }
}

TEST_CASE("DOT export") {
    SECTION("isolated rigid assignment yields a single node and no edges") {
        auto rigid = compile_rigid_gadget("r");
        std::vector<std::vector<Literal>> clauses;
        for (const auto& c : rigid.clauses)
            clauses.push_back({Literal{c[0]}, Literal{c[1]}, Literal{c[2]}});
        Formula f({rigid.variable_names.begin(), rigid.variable_names.end()}, clauses,
                  FormulaSemantics::Nae);
        Envelope env{"naesat", FormulaPack{f, {1, 0, 0, 1}, {1, 0, 0, 1}}};
        std::string dot = export_component_dot(env, 100);
        REQUIRE(dot.find("digraph") != std::string::npos);
        REQUIRE(dot.find("n0 [label") != std::string::npos);
        REQUIRE(dot.find("n0 -> ") == std::string::npos);
    }
    SECTION("empty formula over two variables yields the 4-cycle") {
        Formula f({"x", "y"}, {}, FormulaSemantics::Nae);
        Envelope env{"naesat", FormulaPack{f, {0, 0}, {1, 1}}};
        std::string dot = export_component_dot(env, 100);
        int nodes = 0, edges = 0;
        std::istringstream lines(dot);
        std::string line;
        while (std::getline(lines, line)) {
            if (line.find("[label") != std::string::npos) ++nodes;
            if (line.find(" -> ") != std::string::npos) ++edges;
        }
        REQUIRE(nodes == 4);
        REQUIRE(edges == 4);
    }
    SECTION("three-parallel-blue-edge component has six nodes") {
        std::string dot = export_component_dot(ncl_envelope(), 100);
        int nodes = 0;
        std::istringstream lines(dot);
        std::string line;
        while (std::getline(lines, line))
            if (line.find("[label") != std::string::npos) ++nodes;
        REQUIRE(nodes == 6);
    }
    SECTION("the cap aborts oversized exports") {
        try {
            export_component_dot(ncl_envelope(), 2);
            FAIL("expected ResourceCapExceeded");
        } catch (const Error& e) {
            REQUIRE(e.code() == Errc::resource_cap);
        }
    }
}

TEST_CASE("DIMACS export marks NAE semantics") {
    auto pack = std::get<FormulaPack>(formula_envelope().payload);
    std::string text = export_dimacs(pack);
    REQUIRE(text.find("c semantics: nae") != std::string::npos);
    REQUIRE(text.find("p cnf 3 1") != std::string::npos);
    REQUIRE(text.find("1 2 3 0") != std::string::npos);
}

TEST_CASE("reduce_envelope produces verified envelopes with sidecars") {
    SECTION("ncl to naesat") {
        auto result = reduce_envelope(ncl_envelope(), "ncl", "naesat", {});
        REQUIRE(result.envelope.problem == "naesat");
        REQUIRE_NOTHROW(verify_envelope(result.envelope));
        const auto& pack = std::get<FormulaPack>(result.envelope.payload);
        REQUIRE(pack.formula.monotone());
        REQUIRE(result.sidecar.contains("edge_var"));
        REQUIRE(result.sidecar["edge_var"].size() == 3);
    }
    SECTION("ncl to plain 3-SAT") {
        auto result = reduce_envelope(ncl_envelope(), "ncl", "3sat", {});
        const auto& pack = std::get<FormulaPack>(result.envelope.payload);
        REQUIRE(pack.formula.semantics() == FormulaSemantics::Cnf);
        REQUIRE_NOTHROW(verify_envelope(result.envelope));
    }
    SECTION("tokens to exactcover") {
        auto env = Envelope{"tokens", TokensPack{gen::token_instance(gen::k4(), 1)}};
        auto result = reduce_envelope(env, "tokens", "exactcover", {});
        REQUIRE_NOTHROW(verify_envelope(result.envelope));
        REQUIRE(result.sidecar["element_map"].size() == 5);
    }
    SECTION("exactcover to subsetsum and hypercube") {
        auto env = exactcover_envelope();
        auto sub = reduce_envelope(env, "exactcover", "subsetsum", {});
        REQUIRE_NOTHROW(verify_envelope(sub.envelope));
        REQUIRE(sub.sidecar.contains("g"));
        ReduceOptions opts;
        opts.colors = 23;
        auto cube = reduce_envelope(env, "exactcover", "hypercube", opts);
        REQUIRE_NOTHROW(verify_envelope(cube.envelope));
        REQUIRE(std::get<HypercubePack>(cube.envelope.payload).instance.d == 70);
    }
    SECTION("unsupported pairs are refused") {
        REQUIRE_THROWS_AS(reduce_envelope(ncl_envelope(), "ncl", "hypercube", {}), Error);
        REQUIRE_THROWS_AS(reduce_envelope(ncl_envelope(), "tokens", "exactcover", {}), Error);
    }
}
