// Command-line front end: analytic evaluations, simulations, sweeps and the
// acceptance suite, all driven by one TOML (or JSON) experiment config.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "rlsc/analytic_nrlsc.hpp"
#include "rlsc/analytic_srlsc.hpp"
#include "rlsc/chain.hpp"
#include "rlsc/config.hpp"
#include "rlsc/errors.hpp"
#include "rlsc/report.hpp"
#include "rlsc/sim.hpp"
#include "rlsc/verify.hpp"

using namespace rlsc;
using nlohmann::json;

namespace {

struct Common {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
};

ExperimentConfig load(const Common& c) {
    if (c.config.empty()) throw ConfigError("--config is required for this command");
    ExperimentConfig cfg = load_config(c.config);
    if (c.seed) cfg.sim.seed = *c.seed;
    if (c.threads) {
        if (*c.threads < 1) throw ConfigError("--threads must be >= 1");
        cfg.sim.threads = *c.threads;
    }
    return cfg;
}

std::string output_path(const Common& c, const ExperimentConfig& cfg, const std::string& command) {
    if (!c.out.empty()) return c.out;
    if (!cfg.output.empty()) return cfg.output;
    return command + ".csv";
}

std::string summary_path(const std::string& csv) {
    const auto dot = csv.rfind('.');
    const auto slash = csv.find_last_of('/');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) return csv.substr(0, dot) + ".json";
    return csv + ".json";
}

json cell_json(const Cell& c) {
    if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
    if (const auto* d = std::get_if<double>(&c)) return *d;
    const auto& s = std::get<std::string>(c);
    return s.empty() ? json(nullptr) : json(s);
}

void write_results(const Table& t, const std::string& path, const std::string& command, const ExperimentConfig& cfg) {
    emit_csv(t, path);
    json rows = json::array();
    for (const auto& row : t.rows) {
        json o = json::object();
        for (std::size_t i = 0; i < row.size(); ++i) o[t.columns[i]] = cell_json(row[i]);
        rows.push_back(o);
    }
    json summary = {{"command", command}, {"csv", path},  {"seed", cfg.sim.seed},
                    {"columns", t.columns}, {"rows", rows}};
    write_file(summary_path(path), summary.dump(2) + "\n");
    spdlog::info("wrote {} rows to {}", t.rows.size(), path);
}

Cell optional_cell(const std::optional<double>& v) {
    return v ? Cell{*v} : Cell{std::string()};
}

Cell alpha_cell(const CodeParams& p) {
    return p.alpha ? Cell{static_cast<std::int64_t>(*p.alpha)} : Cell{std::string("inf")};
}

std::vector<Engine> engines_or_default(const ExperimentConfig& cfg) {
    if (!cfg.engines.empty()) return cfg.engines;
    return {Engine{}};
}

int cmd_analytic_nrlsc(const Common& c) {
    const ExperimentConfig cfg = load(c);
    Table t;
    t.columns = {"axis", "value", "K", "N", "alpha", "delta", "pe", "E_interval", "E_LG", "E_LB1", "E_LB2",
                 "condition"};
    auto one = [&](const std::string& axis, double value, const Scenario& s) {
        if (s.code.mode != Mode::Nonsystematic || s.code.infinite_memory())
            throw ConfigError("code: analytic-nrlsc needs mode = \"nonsystematic\" and a finite alpha");
        const DebtChain chain = DebtChain::build(s.code, s.channel);
        const AnalyticTerms a = nrlsc_terms(chain, stationary_initial(chain), s.code.delta, *s.code.alpha);
        t.add({axis, value, static_cast<std::int64_t>(s.code.K), static_cast<std::int64_t>(s.code.N),
               alpha_cell(s.code), static_cast<std::int64_t>(s.code.delta), a.pe, a.E_interval, a.E_LG, a.E_LB1,
               a.E_LB2, a.condition});
    };
    if (cfg.sweep) {
        for (double v : cfg.sweep->values) one(cfg.sweep->axis, v, cfg.scenario(cfg.sweep->axis, v));
    } else {
        one("none", 0.0, cfg.base());
    }
    write_results(t, output_path(c, cfg, "analytic-nrlsc"), "analytic-nrlsc", cfg);
    return 0;
}

int cmd_analytic_srlsc(const Common& c) {
    const ExperimentConfig cfg = load(c);
    if (!cfg.srlsc) throw ConfigError("srlsc: missing section");
    Table t;
    t.columns = {"p", "delta", "l_max_used", "tail_bound", "numerator", "denominator", "pe", "converged"};
    for (double p : cfg.srlsc->p)
        for (int d : cfg.srlsc->delta) {
            const SrlscInfiniteResult r = pe_srlsc_infinite(p, d, cfg.srlsc->l_max);
            t.add({p, static_cast<std::int64_t>(d), static_cast<std::int64_t>(r.l_max_used), r.tail_bound, r.numerator,
                   r.denominator, r.pe, static_cast<std::int64_t>(r.converged)});
        }
    write_results(t, output_path(c, cfg, "analytic-srlsc"), "analytic-srlsc", cfg);
    return 0;
}

int cmd_simulate(const Common& c) {
    const ExperimentConfig cfg = load(c);
    const Scenario s = cfg.base();
    Table t;
    t.columns = {"T",      "engine",  "pe_theory", "pe_sim",         "rel_dev",
                 "mean_round_rel_dev", "ci_low", "ci_high", "cycles", "slots",
                 "errors", "E_interval_hat", "E_errors_per_cycle_hat", "rounds", "seed"};
    for (const Engine& e : engines_or_default(cfg)) {
        const std::optional<double> theory = analytic_pe(s, e);
        for (std::int64_t T : cfg.T_values) {
            SimOptions o = cfg.sim;
            o.T = T;
            const PeEstimate est = estimate_pe(s.channel, s.code, o, e);
            std::optional<double> dev, round_dev;
            if (theory && est.pe_hat > 0.0) {
                dev = std::abs(*theory - est.pe_hat) / est.pe_hat;
                double m = 0.0;
                int n = 0;
                for (const auto& rc : est.per_round)
                    if (rc.pe() > 0.0) {
                        m += std::abs(*theory - rc.pe()) / rc.pe();
                        ++n;
                    }
                if (n > 0) round_dev = m / n;
            }
            t.add({T, est.engine, optional_cell(theory), est.pe_hat, optional_cell(dev), optional_cell(round_dev),
                   est.ci_low, est.ci_high, est.cycles, est.slots, est.errors, est.E_interval_hat,
                   est.E_errors_per_cycle_hat, static_cast<std::int64_t>(est.rounds),
                   std::to_string(cfg.sim.seed)});
        }
    }
    write_results(t, output_path(c, cfg, "simulate"), "simulate", cfg);
    return 0;
}

int cmd_sweep(const Common& c) {
    const ExperimentConfig cfg = load(c);
    if (!cfg.sweep) throw ConfigError("sweep: missing section");
    cfg.base();
    const auto rows = sweep([&](double v) { return cfg.scenario(cfg.sweep->axis, v); }, cfg.sweep->axis,
                            cfg.sweep->values, engines_or_default(cfg), cfg.sim);
    Table t;
    t.columns = {"axis", "value", "engine", "pe_sim", "ci_low", "ci_high", "pe_theory", "cycles", "slots", "errors",
                 "rounds", "T", "seed"};
    for (const auto& r : rows)
        t.add({r.axis, r.value, r.estimate.engine, r.estimate.pe_hat, r.estimate.ci_low, r.estimate.ci_high,
               optional_cell(r.analytic), r.estimate.cycles, r.estimate.slots, r.estimate.errors,
               static_cast<std::int64_t>(r.estimate.rounds), r.estimate.T, std::to_string(r.estimate.seed)});
    write_results(t, output_path(c, cfg, "sweep"), "sweep", cfg);
    return 0;
}

int cmd_oracle(const Common& c) {
    const ExperimentConfig cfg = load(c);
    const Scenario s = cfg.base();
    if (s.code.mode != Mode::Nonsystematic || s.code.infinite_memory())
        throw ConfigError("code: oracle needs mode = \"nonsystematic\" and a finite alpha");
    const DebtChain chain = DebtChain::build(s.code, s.channel);
    const Eigen::VectorXd pi0 = stationary_initial(chain);
    std::vector<int> deltas = cfg.oracle ? cfg.oracle->delta : std::vector<int>{};
    if (deltas.empty()) deltas.push_back(s.code.delta);
    const int k_max = cfg.oracle ? cfg.oracle->k_max : 0;
    Table t;
    t.columns = {"delta", "pe_analytic", "pe_oracle", "abs_diff", "E_interval_analytic", "E_interval_oracle",
                 "horizon"};
    for (int d : deltas) {
        const AnalyticTerms a = nrlsc_terms(chain, pi0, d, *s.code.alpha);
        const OracleStats o = oracle_cycle_statistics(chain, pi0, d, *s.code.alpha, k_max);
        const double pe_o = o.E_errors / o.E_interval;
        t.add({static_cast<std::int64_t>(d), a.pe, pe_o, std::abs(a.pe - pe_o), a.E_interval, o.E_interval,
               static_cast<std::int64_t>(o.horizon)});
    }
    write_results(t, output_path(c, cfg, "oracle"), "oracle", cfg);
    return 0;
}

int cmd_verify(const Common& c, const std::vector<int>& only, bool verbose) {
    VerifyOptions o;
    o.threads = c.threads.value_or(1);
    o.only = only;
    bool all = true;
    run_acceptance(o, [&](const CriterionResult& r) {
        std::cout << format_result_line(r) << std::endl;
        if (verbose)
            for (const auto& d : r.details) std::cout << "    " << d << "\n";
        all = all && r.pass;
    });
    return all ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random linear streaming code error-probability toolkit"};
    app.require_subcommand(1);
    spdlog::set_level(spdlog::level::warn);
    bool quiet = false, debug = false;
    app.add_flag("-q,--quiet", quiet, "Only print errors");
    app.add_flag("--debug", debug, "Debug logging (condition numbers of every solve)");

    Common common;
    std::vector<int> only;
    bool verbose = false;
    struct Sub {
        const char* name;
        const char* help;
    };
    const Sub subs[] = {
        {"analytic-nrlsc", "Closed-form p_e of non-systematic codes"},
        {"analytic-srlsc", "Closed-form p_e of the infinite-memory systematic rate-1/2 code"},
        {"simulate", "Monte-Carlo p_e for each engine and T, with the closed form where available"},
        {"sweep", "Monte-Carlo p_e over one parameter axis"},
        {"oracle", "Closed form vs exhaustive cycle enumeration"},
        {"verify", "Run the acceptance suite"},
    };
    for (const auto& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        sub->add_option("--config", common.config, "TOML or JSON experiment config");
        sub->add_option("--out", common.out, "CSV output path (the JSON summary goes next to it)");
        sub->add_option("--seed", common.seed, "Override sim.seed");
        sub->add_option("--threads", common.threads, "Worker threads for simulation rounds");
        if (std::string(s.name) == "verify") {
            sub->add_option("--only", only, "Criterion ids to run");
            sub->add_flag("-v,--verbose", verbose, "Print every sub-check");
        }
    }
    CLI11_PARSE(app, argc, argv);
    if (quiet) spdlog::set_level(spdlog::level::err);
    if (debug) spdlog::set_level(spdlog::level::debug);

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        if (cmd == "analytic-nrlsc") return cmd_analytic_nrlsc(common);
        if (cmd == "analytic-srlsc") return cmd_analytic_srlsc(common);
        if (cmd == "simulate") return cmd_simulate(common);
        if (cmd == "sweep") return cmd_sweep(common);
        if (cmd == "oracle") return cmd_oracle(common);
        if (cmd == "verify") return cmd_verify(common, only, verbose);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ContractError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
