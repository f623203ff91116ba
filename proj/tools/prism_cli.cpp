// prism: command line front end for the engine.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "checks.hpp"
#include "config.hpp"
#include "prism/errors.hpp"
#include "prism/syntomic.hpp"

#ifndef PRISM_VERSION
#define PRISM_VERSION "0.0.0"
#endif

using json = nlohmann::json;
using namespace prism;
using namespace prism::cli;

namespace {

enum Exit { kOk = 0, kConfig = 2, kUnstable = 3, kRuntime = 4 };

struct Overrides {
    std::string config_path;
    std::optional<u64> p;
    std::optional<int> M, i, i_min, i_max, prec_z, delta_depth, degree, jmax, jobs;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> eisenstein, format, out;
    std::vector<std::string> relations;
};

void add_job_options(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config_path, "INI configuration file");
    cmd->add_option("--p", o.p, "prime");
    cmd->add_option("--M", o.M, "coefficients Z/p^M");
    cmd->add_option("--eisenstein", o.eisenstein, "coefficients, constant first (\"-3,1\"), or \"z - 3\" up to degree 2");
    cmd->add_option("--relation", o.relations, "relation set, polynomials separated by ';', \"none\" for c = 0")->take_all();
    cmd->add_option("--i", o.i, "weight");
    cmd->add_option("--i-min", o.i_min, "smallest weight");
    cmd->add_option("--i-max", o.i_max, "largest weight");
    cmd->add_option("--prec-z", o.prec_z, "z-precision");
    cmd->add_option("--delta-depth", o.delta_depth, "delta-depth of the envelope");
    cmd->add_option("--degree", o.degree, "monomial degree of the envelope");
    cmd->add_option("--jmax", o.jmax, "largest Nygaard truncation");
    cmd->add_option("--jobs", o.jobs, "parallel cells");
    cmd->add_option("--seed", o.seed, "seed");
    cmd->add_option("--format", o.format, "json or csv");
    cmd->add_option("--out", o.out, "output path");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config_file", "cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

JobConfig resolve(const Overrides& o) {
    JobConfig c = o.config_path.empty() ? JobConfig{} : parse_config(read_file(o.config_path));
    if (o.p) c.p = *o.p;
    if (o.M) c.M = *o.M;
    if (o.eisenstein) {
        c.eisenstein = parse_polynomial(*o.eisenstein);
        if (o.eisenstein->find('z') != std::string::npos && c.eisenstein.size() > 3)
            throw ConfigError("eisenstein_syntax", "eisenstein: the string form is limited to degree 2; use coefficients");
    }
    if (!o.relations.empty()) {
        c.relations.clear();
        for (const auto& r : o.relations) c.relations.push_back(parse_relation_set(r));
    }
    if (o.i) c.i_min = c.i_max = *o.i;
    if (o.i_min) c.i_min = *o.i_min;
    if (o.i_max) c.i_max = *o.i_max;
    if (o.prec_z) c.prec_z = *o.prec_z;
    if (o.delta_depth) c.delta_depth = *o.delta_depth;
    if (o.degree) c.degree = *o.degree;
    if (o.jmax) c.jmax = *o.jmax;
    if (o.jobs) c.jobs = *o.jobs;
    if (o.seed) c.seed = *o.seed;
    if (o.format) c.format = *o.format;
    if (o.out) c.out = *o.out;
    validate(c);
    return c;
}

// write-then-rename
void write_atomic(const std::string& path, const std::string& data) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << data;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, target);
}

void emit(const JobConfig& c, const std::string& data) {
    if (c.out.empty()) std::cout << data;
    else write_atomic(c.out, data);
}

long budget_from_env() {
    const char* v = std::getenv("PRISM_ENGINE_BUDGET_MS");
    if (!v || !*v) return 0;
    char* end = nullptr;
    long ms = std::strtol(v, &end, 10);
    if (*end != '\0' || ms < 0) throw ConfigError("budget", "PRISM_ENGINE_BUDGET_MS must be a non-negative integer");
    return ms;
}

json relations_json(const RelationSet& set) {
    json a = json::array();
    for (const auto& f : set) a.push_back(f);
    return a;
}

json result_json(const SyntomicResult& r, const RelationSet& set) {
    return json{{"p", r.p},
                {"M", r.M},
                {"e", r.e},
                {"eisenstein", r.eisenstein},
                {"relations", relations_json(set)},
                {"i", r.i},
                {"j_used", r.j_used},
                {"h0", r.h0},
                {"h1", r.h1},
                {"euler", r.euler},
                {"stable", {{"j", r.j_stable}, {"precision", r.precision_stable}}},
                {"ledger", {{"N", r.ledger.M_eff}, {"Z", r.ledger.Z_eff}, {"window_J", r.window_J}, {"window_D", r.window_D}}},
                {"runtime_ms", r.runtime_ms}};
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

std::string join(const std::vector<u64>& v) {
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ";" : "") + std::to_string(v[k]);
    return s;
}

const char* kCsvHeader = "p,M,e,eisenstein,relations,i,j_used,h0,h1,euler,stable_j,stable_precision,ledger_N,ledger_Z,status\n";

std::string csv_row(const JobConfig& c, const SweepCell& cell) {
    const RelationSet& set = c.relations[cell.config];
    std::ostringstream o;
    o << c.p << ',' << c.M << ',' << (c.eisenstein.size() - 1) << ',' << csv_field(format_polynomial(c.eisenstein)) << ','
      << csv_field(format_relation_set(set)) << ',' << cell.i << ',';
    if (cell.result) {
        const auto& r = *cell.result;
        o << r.j_used << ',' << join(r.h0) << ',' << join(r.h1) << ',' << r.euler << ',' << (r.j_stable ? "true" : "false") << ','
          << (r.precision_stable ? "true" : "false") << ',' << r.ledger.M_eff << ',' << r.ledger.Z_eff;
    } else {
        o << ",,,,,,,";
    }
    o << ',' << cell.status << '\n';
    return o.str();
}

SyntomicBounds syntomic_bounds(const JobConfig& c) {
    SyntomicBounds b;
    b.Z = c.prec_z;
    if (c.jmax > 0) b.jmax = c.jmax;
    b.budget_ms = budget_from_env();
    return b;
}

int exit_for(const std::vector<SweepCell>& cells) {
    int code = kOk;
    for (const auto& cell : cells) {
        if (cell.status == "error") return kRuntime;
        if (cell.status == "unstable") code = kUnstable;
    }
    return code;
}

std::vector<SweepCell> run_cells(const JobConfig& c) {
    auto family = presentations(c);
    return sweep(family, c.i_min, c.i_max, c.M, syntomic_bounds(c), c.jobs);
}

int cmd_syntomic(const JobConfig& c) {
    auto cells = run_cells(c);
    std::string data;
    if (c.format == "csv") {
        data = kCsvHeader;
        for (const auto& cell : cells) data += csv_row(c, cell);
    } else {
        json all = json::array();
        for (const auto& cell : cells) {
            if (cell.result) {
                all.push_back(result_json(*cell.result, c.relations[cell.config]));
            } else {
                all.push_back({{"relations", relations_json(c.relations[cell.config])}, {"i", cell.i}, {"error", cell.error}});
            }
        }
        data = (all.size() == 1 ? all[0] : all).dump(2) + "\n";
    }
    emit(c, data);
    for (const auto& cell : cells)
        if (cell.status == "error") std::cerr << "prism: cell i=" << cell.i << ": " << cell.error << "\n";
    return exit_for(cells);
}

int cmd_sweep(const JobConfig& c) {
    if (c.out.empty()) throw ConfigError("out", "sweep needs --out PATH");
    if (c.format != "csv") throw ConfigError("format", "sweep writes CSV tables");
    auto cells = run_cells(c);
    std::string table = kCsvHeader;
    json manifest_cells = json::array();
    for (const auto& cell : cells) {
        table += csv_row(c, cell);
        manifest_cells.push_back({{"relations", format_relation_set(c.relations[cell.config])},
                                  {"i", cell.i},
                                  {"status", cell.status},
                                  {"error", cell.error}});
    }
    json manifest{{"tool", "prism"},
                  {"version", PRISM_VERSION},
                  {"config_hash", config_hash(c)},
                  {"config", serialize_config(c)},
                  {"table", std::filesystem::path(c.out).filename().string()},
                  {"cells", manifest_cells}};
    write_atomic(c.out, table);
    write_atomic(c.out + ".manifest.json", manifest.dump(2) + "\n");
    return exit_for(cells);
}

json certificate_json(const EnvelopeCertificate& cert) {
    return json{{"closure_defects", cert.closure_defects},
                {"d_torsion_free", cert.d_torsion_free},
                {"p_torsion_free", cert.p_torsion_free},
                {"p_torsion_depth", cert.p_torsion_depth},
                {"stable", cert.stable},
                {"certified", cert.certified()}};
}

int cmd_envelope(const JobConfig& c) {
    auto family = presentations(c);
    json all = json::array();
    int code = kOk;
    for (std::size_t k = 0; k < family.size(); ++k) {
        json j{{"p", c.p}, {"M", c.M}, {"e", c.eisenstein.size() - 1}, {"eisenstein", c.eisenstein}, {"relations", relations_json(c.relations[k])}};
        if (family[k].zero_ring) {
            j["zero_ring"] = true;
            all.push_back(j);
            continue;
        }
        EnvelopeBounds b;
        b.K = c.delta_depth;
        b.D = c.degree;
        b.Z = c.prec_z;
        try {
            auto env = build_envelope(family[k], b);
            std::vector<std::string> names;
            for (const auto& m : env.provenance) names.push_back(m.name);
            j["D"] = env.D;
            j["J"] = env.J;
            j["ledger"] = {{"N", env.ledger.M_eff}, {"Z", env.ledger.Z_eff}};
            j["length"] = env.length();
            j["monomials"] = names;
            j["certificate"] = certificate_json(env.certificate);
            if (!env.certificate.certified() && code == kOk) code = kUnstable;
        } catch (const std::exception& e) {
            j["error"] = e.what();
            code = kRuntime;
        }
        all.push_back(j);
    }
    emit(c, (all.size() == 1 ? all[0] : all).dump(2) + "\n");
    return code;
}

int cmd_nygaard(const JobConfig& c) {
    auto family = presentations(c);
    const int J = c.jmax > 0 ? c.jmax : 8;
    const int imax = std::max(c.i_max, 0);
    json all = json::array();
    int code = kOk;
    for (std::size_t k = 0; k < family.size(); ++k) {
        json j{{"p", c.p}, {"M", c.M}, {"e", c.eisenstein.size() - 1}, {"eisenstein", c.eisenstein}, {"relations", relations_json(c.relations[k])}};
        if (family[k].zero_ring) {
            j["zero_ring"] = true;
            all.push_back(j);
            continue;
        }
        try {
            auto env = build_envelope(family[k], nygaard_bounds(family[k], J, imax), false);
            auto nf = nygaard_filtration(build_frobenius_twist(env, imax), J);
            std::vector<long> lengths;
            bool strict = true;
            for (int t = 0; t <= nf.jmax(); ++t) {
                lengths.push_back(nf.at(t).length());
                if (t > 0 && t < J) strict = strict && lengths[static_cast<std::size_t>(t)] < lengths[static_cast<std::size_t>(t) - 1];
            }
            j["J"] = J;
            j["ledger"] = {{"N", env.ledger.M_eff}, {"Z", env.ledger.Z_eff}};
            j["Dt"] = nf.twist.Dt;
            j["twist_rank"] = nf.twist.rank();
            j["twist_length"] = nf.twist.lattice.length();
            j["depth"] = nf.twist.depth;
            j["contained"] = nf.twist.contained;
            j["saturated"] = nf.twist.saturated;
            j["piece_lengths"] = lengths;
            j["strictly_decreasing"] = strict;
            if (!(nf.twist.contained && nf.twist.saturated) && code == kOk) code = kUnstable;
        } catch (const std::exception& e) {
            j["error"] = e.what();
            code = kRuntime;
        }
        all.push_back(j);
    }
    emit(c, (all.size() == 1 ? all[0] : all).dump(2) + "\n");
    return code;
}

int cmd_check(const std::string& suite, int trials, std::uint64_t seed) {
    if (suite.empty()) throw ConfigError("usage", "check needs a suite: witt, delta, prism, envelope, nygaard or filtration");
    const auto& names = suite_names();
    if (std::find(names.begin(), names.end(), suite) == names.end()) throw ConfigError("usage", "unknown suite '" + suite + "'");
    auto t = run_suite(suite, trials, seed);
    for (const auto& [prop, c] : t.counts)
        std::cout << (c.second == 0 ? "PASS " : "FAIL ") << prop << ": " << c.first << " passed, " << c.second << " failed\n";
    std::cout << suite << ": " << t.passed() << " passed, " << t.failed() << " failed\n";
    return t.failed() == 0 ? kOk : 1;
}

void config_diagnostic(const ConfigError& e) {
    std::cerr << json{{"error", "config"}, {"rule", e.rule}, {"message", e.what()}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"prism: prismatic envelopes, Nygaard filtrations and relative syntomic cohomology"};
    app.set_version_flag("--version", PRISM_VERSION);
    app.require_subcommand(1);

    Overrides o;
    CLI::App* syn = app.add_subcommand("syntomic", "H0 and H1 of Z/p^M(i)(R/A)");
    CLI::App* env = app.add_subcommand("envelope", "certified prismatic envelope");
    CLI::App* nyg = app.add_subcommand("nygaard", "Frobenius twist and Nygaard filtration");
    CLI::App* swp = app.add_subcommand("sweep", "grid of syntomic cells written as CSV plus manifest");
    for (auto* cmd : {syn, env, nyg, swp}) add_job_options(cmd, o);

    CLI::App* chk = app.add_subcommand("check", "randomized property suites");
    std::string suite;
    int trials = 100;
    std::uint64_t seed = 0;
    chk->add_option("suite", suite, "witt, delta, prism, envelope, nygaard or filtration")->required();
    chk->add_option("--trials", trials, "trials per property");
    chk->add_option("--seed", seed, "seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfig;
    }

    try {
        if (chk->parsed()) return cmd_check(suite, trials, seed);
        JobConfig c = resolve(o);
        if (syn->parsed()) return cmd_syntomic(c);
        if (env->parsed()) return cmd_envelope(c);
        if (nyg->parsed()) return cmd_nygaard(c);
        return cmd_sweep(c);
    } catch (const ConfigError& e) {
        config_diagnostic(e);
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "prism: " << e.what() << "\n";
        return kRuntime;
    }
}
