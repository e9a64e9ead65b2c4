// pcs_main.cc -- command-line front end over the C API in pcs.h.

#include <cstdio>
#include <string>

#include <CLI11.hpp>
#include <pcs.h>

namespace {

int fail() {
    std::fprintf(stderr, "error: %s\n", pcs_last_error());
    return 2;
}

/// Verdict/record lines to stdout, side notes to stderr; the report
/// dictates the exit code.
int print_report(pcs_report* rep) {
    for (size_t i = 0; i < pcs_report_size(rep); ++i)
        std::printf("%s\n", pcs_report_line(rep, i));
    for (size_t i = 0; i < pcs_report_note_count(rep); ++i)
        std::fprintf(stderr, "%s\n", pcs_report_note(rep, i));
    int rc = pcs_report_exit_code(rep);
    pcs_report_free(rep);
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coverability checking for grammar-described process networks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("pcs ") + pcs_version());

    std::string spec_path, mode = "auto", emit_lola, emit_pnml;
    bool witness = false;
    long long bounded_reach = 0, state_cap = 0;
    int max_vertices = 0, threads = 0;

    CLI::App* check =
        app.add_subcommand("check", "analyze the spec and print one verdict per query");
    check->add_option("spec", spec_path, "spec file")->required();
    check->add_option("--mode", mode, "auto, counting, or pebble")
        ->check(CLI::IsMember({"auto", "counting", "pebble"}));
    check->add_flag("--witness", witness, "append witness lines to positive verdicts");
    check->add_option("--bounded-reach", bounded_reach,
                      "explore reach queries up to N abstract markings")
        ->check(CLI::PositiveNumber);
    check->add_option("--emit-lola", emit_lola, "write LoLA nets and formula files to DIR");
    check->add_option("--emit-pnml", emit_pnml, "write PNML nets to DIR");

    CLI::App* exp = app.add_subcommand("export", "write the abstraction's nets to disk");
    exp->add_option("spec", spec_path, "spec file")->required();
    exp->add_option("--emit-lola", emit_lola, "write LoLA nets and formula files to DIR");
    exp->add_option("--emit-pnml", emit_pnml, "write PNML nets to DIR");

    CLI::App* oracle =
        app.add_subcommand("oracle", "cross-validate the pipelines by brute force");
    oracle->add_option("spec", spec_path, "spec file")->required();
    oracle->add_option("--max-vertices", max_vertices, "instance size bound (default 8)");
    oracle->add_option("--state-cap", state_cap,
                       "markings explored per instance (default 1000000)");
    oracle->add_option("--threads", threads, "worker threads (default: hardware)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    pcs_spec* spec = nullptr;
    if (pcs_spec_load(spec_path.c_str(), &spec) != PCS_OK) return fail();

    int rc = 2;
    pcs_report* rep = nullptr;
    if (check->parsed()) {
        pcs_check_options opt;
        pcs_check_options_init(&opt);
        opt.mode = mode == "counting" ? PCS_MODE_COUNTING
                   : mode == "pebble" ? PCS_MODE_PEBBLE
                                      : PCS_MODE_AUTO;
        opt.witness = witness ? 1 : 0;
        opt.bounded_reach = bounded_reach;
        if (!emit_lola.empty()) opt.emit_lola = emit_lola.c_str();
        if (!emit_pnml.empty()) opt.emit_pnml = emit_pnml.c_str();
        rc = pcs_check(spec, &opt, &rep) == PCS_OK ? print_report(rep) : fail();
    } else if (exp->parsed()) {
        rc = pcs_export(spec, emit_lola.empty() ? nullptr : emit_lola.c_str(),
                        emit_pnml.empty() ? nullptr : emit_pnml.c_str(), &rep) == PCS_OK
                 ? print_report(rep)
                 : fail();
    } else {
        pcs_oracle_options opt;
        pcs_oracle_options_init(&opt);
        opt.max_vertices = max_vertices;
        opt.state_cap = state_cap;
        opt.threads = threads;
        rc = pcs_oracle(spec, &opt, &rep) == PCS_OK ? print_report(rep) : fail();
    }
    pcs_spec_free(spec);
    return rc;
}
