// reconfig: command-line surface over the reconfiguration toolkit.
//
// Exit codes, stable across subcommands:
//   0 success / reachable        3 resource cap exceeded
//   1 unreachable                4 unsupported reduction pair
//   2 invalid input              5 gadget audit failure

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "reconfig/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUnreachable = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitCap = 3;
constexpr int kExitUnsupported = 4;
constexpr int kExitAudit = 5;

int exit_code_for(const reconfig::Error& e) {
    switch (e.code()) {
        case reconfig::Errc::resource_cap: return kExitCap;
        case reconfig::Errc::audit_failure: return kExitAudit;
        default: return kExitInvalid;
    }
}

reconfig::Envelope load_envelope(const std::string& path) {
    return reconfig::parse_envelope(reconfig::load_json_file(path));
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) reconfig::fail(reconfig::Errc::invalid_input, "cannot write '" + path + "'");
    out << text;
}

reconfig::SearchLimits limits_from(std::uint64_t max_states, std::uint64_t max_moves) {
    reconfig::SearchLimits limits;
    if (const char* env = std::getenv("RECONFIG_MAX_STATES")) {
        char* end = nullptr;
        std::uint64_t v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) limits.max_states = v;
    }
    if (max_states) limits.max_states = max_states;
    if (max_moves) limits.max_moves = max_moves;
    return limits;
}

int cmd_verify(const std::string& path) {
    reconfig::Envelope env = load_envelope(path);
    reconfig::verify_envelope(env);
    std::cout << "ok " << env.problem << " digest=" << reconfig::envelope_digest(env) << "\n";
    return kExitOk;
}

int cmd_reduce(const std::string& from, const std::string& to, const std::string& in_path,
               const std::string& out_path, const std::string& map_path,
               const reconfig::ReduceOptions& options) {
    static const std::set<std::pair<std::string, std::string>> supported = {
        {"ncl", "naesat"},
        {"ncl", "3sat"},
        {"tokens", "exactcover"},
        {"exactcover", "subsetsum"},
        {"exactcover", "hypercube"},
    };
    if (!supported.count({from, to})) {
        std::cerr << "unsupported reduction pair (" << from << ", " << to << ")\n";
        return kExitUnsupported;
    }
    reconfig::Envelope env = load_envelope(in_path);
    reconfig::verify_envelope(env);
    auto result = reconfig::reduce_envelope(env, from, to, options);
    write_text(out_path, reconfig::serialize_envelope(result.envelope).dump(2) + "\n");
    if (!map_path.empty()) write_text(map_path, result.sidecar.dump(2) + "\n");
    std::cout << "wrote " << out_path << "\n";
    return kExitOk;
}

int cmd_solve(const std::string& path, std::uint64_t max_states, std::uint64_t max_moves,
              const std::string& cert_path) {
    reconfig::Envelope env = load_envelope(path);
    auto outcome = reconfig::solve_envelope(env, limits_from(max_states, max_moves));
    if (!outcome.reachable) {
        std::cout << "unreachable states=" << outcome.states_explored << "\n";
        return kExitUnreachable;
    }
    std::cout << "reachable moves=" << (outcome.certificate->configurations.size() - 1)
              << " states=" << outcome.states_explored << "\n";
    if (!cert_path.empty())
        write_text(cert_path, reconfig::serialize_certificate(*outcome.certificate).dump(2) + "\n");
    return kExitOk;
}

int cmd_check_cert(const std::string& instance_path, const std::string& cert_path) {
    reconfig::Envelope env = load_envelope(instance_path);
    reconfig::verify_envelope(env);
    auto cert = reconfig::parse_certificate(reconfig::load_json_file(cert_path));
    std::string diagnostic;
    if (!reconfig::check_certificate_file(env, cert, &diagnostic)) {
        std::cerr << "certificate rejected: " << diagnostic << "\n";
        return kExitInvalid;
    }
    std::cout << "certificate ok (" << cert.configurations.size() << " configurations)\n";
    return kExitOk;
}

int cmd_gadget_audit() {
    auto report = reconfig::gadget_audit();
    std::cout << "rigid gadget isolated: " << (report.rigid_isolated ? "yes" : "NO") << "\n";
    std::cout << "variant  twin  polarity(x,y,z)                           cl aux proj lift tree\n";
    for (const auto& e : report.entries) {
        std::string pol;
        for (std::size_t i = 0; i < 3; ++i) {
            if (i) pol += ",";
            pol += reconfig::polarity_name(e.polarity[i]);
        }
        pol.resize(40, ' ');
        std::printf("%-8s %-5s %s %2d %3d %4s %4s %4s\n", e.variant.c_str(),
                    e.twin ? "yes" : "no", pol.c_str(), e.clause_count, e.aux_count,
                    e.projection_ok ? "ok" : "FAIL", e.lifts_ok ? "ok" : "FAIL",
                    e.forest_ok ? "ok" : "FAIL");
        if (!e.ok()) std::cerr << "  witness: " << e.witness << "\n";
    }
    if (!report.ok()) {
        if (!report.rigid_isolated) std::cerr << "rigid witness: " << report.rigid_witness << "\n";
        return kExitAudit;
    }
    return kExitOk;
}

int cmd_export_dot(const std::string& path, std::uint64_t cap, const std::string& out_path) {
    reconfig::Envelope env = load_envelope(path);
    std::string dot = reconfig::export_component_dot(env, cap);
    if (out_path.empty()) std::cout << dot;
    else write_text(out_path, dot);
    return kExitOk;
}

int cmd_export_dimacs(const std::string& path, const std::string& out_path) {
    reconfig::Envelope env = load_envelope(path);
    auto* pack = std::get_if<reconfig::FormulaPack>(&env.payload);
    if (!pack)
        reconfig::fail(reconfig::Errc::invalid_input, "DIMACS export needs a naesat instance");
    std::string text = reconfig::export_dimacs(*pack);
    if (out_path.empty()) std::cout << text;
    else write_text(out_path, text);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"combinatorial reconfiguration toolkit"};
    app.require_subcommand(1);

    std::string in_path, out_path, cert_path, map_path, from, to;
    std::uint64_t max_states = 0, max_moves = 0, cap = 1000;
    reconfig::ReduceOptions reduce_options;
    unsigned padding = 0;
    int colors = 0;

    auto* verify = app.add_subcommand("verify", "validate an instance envelope");
    verify->add_option("instance", in_path)->required();

    auto* reduce = app.add_subcommand("reduce", "compile an instance into another model");
    reduce->add_option("--from", from, "source problem")->required();
    reduce->add_option("--to", to, "target problem")->required();
    reduce->add_option("input", in_path)->required();
    reduce->add_option("output", out_path)->required();
    reduce->add_option("--map", map_path, "sidecar mapping file");
    reduce->add_flag("--share-rigid", reduce_options.share_rigid,
                     "reuse one global rigid gadget supply (ncl->naesat)");
    reduce->add_option("--padding", padding,
                       "compact padding bits per color level (exactcover->subsetsum)");
    reduce->add_option("--colors", colors, "pad the color count (exactcover->hypercube)");

    auto* solve = app.add_subcommand("solve", "decide reachability by exhaustive search");
    solve->add_option("instance", in_path)->required();
    solve->add_option("--max-states", max_states, "visited-state cap");
    solve->add_option("--max-moves", max_moves, "certificate length cap");
    solve->add_option("--emit-cert", cert_path, "write the certificate here");

    auto* check = app.add_subcommand("check-cert", "replay a certificate against its instance");
    check->add_option("instance", in_path)->required();
    check->add_option("certificate", cert_path)->required();

    app.add_subcommand("gadget-audit", "audit the NAE-SAT node gadget table");

    auto* dot = app.add_subcommand("export-dot", "DOT graph of the reachable component");
    dot->add_option("instance", in_path)->required();
    dot->add_flag("--config-graph", "export the configuration graph (default behavior)");
    dot->add_option("--cap", cap, "abort if the component exceeds this many states");
    dot->add_option("-o,--output", out_path, "output file (stdout otherwise)");

    auto* dimacs = app.add_subcommand("export-dimacs", "DIMACS-style dump of a formula instance");
    dimacs->add_option("instance", in_path)->required();
    dimacs->add_option("-o,--output", out_path, "output file (stdout otherwise)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    try {
        if (app.got_subcommand("verify")) return cmd_verify(in_path);
        if (app.got_subcommand("reduce")) {
            if (reduce->count("--padding")) reduce_options.padding = padding;
            if (reduce->count("--colors")) reduce_options.colors = colors;
            return cmd_reduce(from, to, in_path, out_path, map_path, reduce_options);
        }
        if (app.got_subcommand("solve")) return cmd_solve(in_path, max_states, max_moves, cert_path);
        if (app.got_subcommand("check-cert")) return cmd_check_cert(in_path, cert_path);
        if (app.got_subcommand("gadget-audit")) return cmd_gadget_audit();
        if (app.got_subcommand("export-dot")) return cmd_export_dot(in_path, cap, out_path);
        if (app.got_subcommand("export-dimacs")) return cmd_export_dimacs(in_path, out_path);
    } catch (const reconfig::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
    return kExitInvalid;
}
