// capi.cc -- the C shell around the library: opaque handles, status
// codes, and the stable verdict/report vocabulary front ends print.

#include "pcs.h"

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "counting.hh"
#include "netio.hh"
#include "oracle.hh"
#include "pebble.hh"
#include "specfile.hh"

struct pcs_spec {
    pcs::SpecFile file;
};

struct pcs_report {
    std::vector<std::string> lines;  // stdout: verdicts, records
    std::vector<std::string> notes;  // stderr: side remarks, files written
    int exit_code = 0;
};

namespace {

thread_local std::string t_error;

pcs_status set_error(pcs_status st, std::string msg) {
    t_error = std::move(msg);
    return st;
}

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Maps exceptions from the library onto status codes, keeping the
/// message for pcs_last_error.
template <class Fn>
pcs_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const pcs::ParseError& e) {
        return set_error(PCS_E_PARSE, e.what());
    } catch (const IoError& e) {
        return set_error(PCS_E_IO, e.what());
    } catch (const std::invalid_argument& e) {
        return set_error(PCS_E_INVALID, e.what());
    } catch (const std::exception& e) {
        return set_error(PCS_E_INTERNAL, e.what());
    }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    os << text;
    if (!os) throw IoError("cannot write " + path.string());
}

/// Exports every combined net (canonically sorted) and, next to the
/// LoLA nets, one formula file per query. Returns the paths written.
std::vector<std::string> emit_nets(const pcs::SpecFile& sp, const pcs::CountingAbstraction& ca,
                                   const char* lola_dir, const char* pnml_dir) {
    namespace fs = std::filesystem;
    std::vector<std::string> written;
    auto prepare = [](const char* dir) {
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) throw IoError("cannot create directory " + std::string(dir));
        return fs::path(dir);
    };
    std::optional<fs::path> lola, pnml;
    if (lola_dir) lola = prepare(lola_dir);
    if (pnml_dir) pnml = prepare(pnml_dir);

    for (std::size_t i = 0; i < ca.nets.size(); ++i) {
        const std::string base = "net_" + std::to_string(i);
        pcs::PetriNet sorted = pcs::canonical_sorted(ca.nets[i].pn);
        if (lola) {
            write_text(*lola / (base + ".lola"), pcs::to_lola(sorted));
            written.push_back((*lola / (base + ".lola")).string());
            for (const pcs::Query& q : sp.queries) {
                fs::path f = *lola / (base + "." + q.id + ".formula");
                write_text(f, pcs::lola_formula(sp.types, ca.nets[i], q));
                written.push_back(f.string());
            }
        }
        if (pnml) {
            write_text(*pnml / (base + ".pnml"), pcs::to_pnml(sorted, base));
            written.push_back((*pnml / (base + ".pnml")).string());
        }
    }
    return written;
}

/// Mode resolution: auto picks the exact pipeline only when the types,
/// the grammar, and every query fit the pebble-passing fragment; an
/// explicit pebble request fails loudly when the grammar does not.
bool use_pebble(const pcs::SpecFile& sp, int mode) {
    if (mode == PCS_MODE_COUNTING) return false;
    pcs::PpsCheck pps = pcs::check_pps(sp.types, sp.grammar);
    if (mode == PCS_MODE_PEBBLE) {
        if (!pps.ok)
            throw std::invalid_argument("pebble mode rejected: " + pps.offending);
        return true;
    }
    if (!pps.ok) return false;
    for (const pcs::Query& q : sp.queries)
        if (!pcs::pps_applicable(q)) return false;
    return true;
}

std::string witness_line(const std::string& id, int net_index,
                         const std::vector<std::string>& steps) {
    std::string line = "WITNESS " + id + " net=" + std::to_string(net_index) + ":";
    for (const std::string& s : steps) line += " " + s;
    return line;
}

/// A stated expectation must match the verdict up to any parenthesized
/// qualifier; with none stated, only non-violation verdicts pass.
bool expectation_met(const pcs::Query& q, const std::string& verdict) {
    std::string prefix = verdict.substr(0, verdict.find('('));
    if (!q.expect.empty()) return prefix == q.expect;
    return prefix == "SAFE" || prefix == "UNCOVERABLE" || prefix == "EXPORTED";
}

}  // namespace

extern "C" {

void pcs_check_options_init(pcs_check_options* opt) {
    if (opt) *opt = pcs_check_options{PCS_MODE_AUTO, 0, 0, nullptr, nullptr};
}

void pcs_oracle_options_init(pcs_oracle_options* opt) {
    if (opt) *opt = pcs_oracle_options{0, 0, 0};
}

pcs_status pcs_spec_load(const char* path, pcs_spec** out) {
    if (!path || !out) return set_error(PCS_E_INVALID, "null argument");
    *out = nullptr;
    try {
        auto spec = std::make_unique<pcs_spec>(pcs::load_spec(path));
        *out = spec.release();
        return PCS_OK;
    } catch (const pcs::ParseError& e) {
        return set_error(PCS_E_PARSE, e.what());
    } catch (const std::exception& e) {
        return set_error(PCS_E_IO, e.what());
    }
}

pcs_status pcs_spec_parse(const char* text, const char* name, pcs_spec** out) {
    if (!text || !out) return set_error(PCS_E_INVALID, "null argument");
    *out = nullptr;
    return guarded([&] {
        auto spec = std::make_unique<pcs_spec>(
            pcs::parse_spec(text, name ? name : "<string>"));
        *out = spec.release();
        return PCS_OK;
    });
}

void pcs_spec_free(pcs_spec* spec) { delete spec; }

pcs_status pcs_check(const pcs_spec* spec, const pcs_check_options* opt, pcs_report** out) {
    if (!spec || !out) return set_error(PCS_E_INVALID, "null argument");
    *out = nullptr;
    pcs_check_options defaults;
    pcs_check_options_init(&defaults);
    if (!opt) opt = &defaults;
    return guarded([&] {
        const pcs::SpecFile& sp = spec->file;
        auto rep = std::make_unique<pcs_report>();
        bool pebble = use_pebble(sp, opt->mode);
        bool want_export = opt->emit_lola || opt->emit_pnml;

        std::optional<pcs::CountingAbstraction> built;
        auto counting = [&]() -> const pcs::CountingAbstraction& {
            if (!built) built = pcs::build_counting(sp.types, sp.grammar);
            return *built;
        };

        bool mismatch = false;
        for (const pcs::Query& q : sp.queries) {
            std::string verdict;
            std::vector<std::string> extra;
            if (pebble) {
                verdict = pcs::decide_cover_pps(sp.types, sp.grammar, q) ? "COVERABLE"
                                                                         : "UNCOVERABLE";
            } else if (q.cover) {
                pcs::CoverOutcome res =
                    pcs::verify_cover(sp.types, counting(), q, opt->witness != 0);
                verdict = res.coverable ? "UNKNOWN(coverable-in-abstraction)" : "SAFE";
                if (res.coverable && opt->witness)
                    extra.push_back(witness_line(q.id, res.net_index, res.witness));
            } else if (opt->bounded_reach > 0) {
                pcs::ReachOutcome res = pcs::verify_reach(
                    sp.types, counting(), q, static_cast<std::size_t>(opt->bounded_reach));
                switch (res.kind) {
                    case pcs::ReachOutcome::Unreachable:
                        verdict = "SAFE";
                        break;
                    case pcs::ReachOutcome::Reachable:
                        verdict = "UNKNOWN(reachable-in-abstraction)";
                        if (opt->witness)
                            extra.push_back(witness_line(q.id, res.net_index, res.witness));
                        break;
                    case pcs::ReachOutcome::Truncated:
                        verdict = want_export ? "EXPORTED" : "UNKNOWN(exploration-truncated)";
                        break;
                }
            } else {
                verdict = "EXPORTED";
                if (!want_export)
                    rep->notes.push_back("note: reach query " + q.id +
                                         " was not written anywhere; pass --emit-lola or "
                                         "--emit-pnml, or bound it with --bounded-reach");
            }
            rep->lines.push_back("QUERY " + q.id + ": " + verdict);
            for (std::string& e : extra) rep->lines.push_back(std::move(e));
            if (!expectation_met(q, verdict)) mismatch = true;
        }

        if (want_export)
            for (const std::string& f : emit_nets(sp, counting(), opt->emit_lola, opt->emit_pnml))
                rep->notes.push_back("wrote " + f);

        rep->exit_code = mismatch ? 1 : 0;
        *out = rep.release();
        return PCS_OK;
    });
}

pcs_status pcs_export(const pcs_spec* spec, const char* lola_dir, const char* pnml_dir,
                      pcs_report** out) {
    if (!spec || !out) return set_error(PCS_E_INVALID, "null argument");
    *out = nullptr;
    if (!lola_dir && !pnml_dir)
        return set_error(PCS_E_INVALID, "export needs at least one output directory");
    return guarded([&] {
        auto rep = std::make_unique<pcs_report>();
        pcs::CountingAbstraction ca =
            pcs::build_counting(spec->file.types, spec->file.grammar);
        for (const std::string& f : emit_nets(spec->file, ca, lola_dir, pnml_dir))
            rep->lines.push_back("WROTE " + f);
        *out = rep.release();
        return PCS_OK;
    });
}

pcs_status pcs_oracle(const pcs_spec* spec, const pcs_oracle_options* opt, pcs_report** out) {
    if (!spec || !out) return set_error(PCS_E_INVALID, "null argument");
    *out = nullptr;
    return guarded([&] {
        pcs::OracleOptions oracle;
        if (opt) {
            if (opt->max_vertices > 0) oracle.max_vertices = opt->max_vertices;
            if (opt->state_cap > 0) oracle.state_cap = static_cast<std::size_t>(opt->state_cap);
            if (opt->threads > 0) oracle.threads = static_cast<unsigned>(opt->threads);
        }
        const pcs::SpecFile& sp = spec->file;
        pcs::OracleReport result =
            pcs::check_soundness(sp.types, sp.grammar, sp.queries, oracle);
        auto rep = std::make_unique<pcs_report>();
        rep->lines = result.lines();
        rep->exit_code = result.clean() ? 0 : 1;
        *out = rep.release();
        return PCS_OK;
    });
}

size_t pcs_report_size(const pcs_report* rep) { return rep ? rep->lines.size() : 0; }

const char* pcs_report_line(const pcs_report* rep, size_t i) {
    return rep && i < rep->lines.size() ? rep->lines[i].c_str() : nullptr;
}

size_t pcs_report_note_count(const pcs_report* rep) { return rep ? rep->notes.size() : 0; }

const char* pcs_report_note(const pcs_report* rep, size_t i) {
    return rep && i < rep->notes.size() ? rep->notes[i].c_str() : nullptr;
}

int pcs_report_exit_code(const pcs_report* rep) { return rep ? rep->exit_code : 2; }

void pcs_report_free(pcs_report* rep) { delete rep; }

const char* pcs_last_error(void) { return t_error.c_str(); }

const char* pcs_version(void) { return "0.1.0"; }

}  // extern "C"
