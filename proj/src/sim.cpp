#include "rlsc/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "rlsc/analytic_nrlsc.hpp"
#include "rlsc/analytic_srlsc.hpp"
#include "rlsc/baseline.hpp"
#include "rlsc/chain.hpp"
#include "rlsc/codec.hpp"
#include "rlsc/errors.hpp"
#include "rlsc/rng.hpp"

namespace rlsc {

Engine Engine::parse(const std::string& s) {
    const auto colon = s.find(':');
    const std::string kind = s.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : s.substr(colon + 1);
    Engine e;
    if (kind == "debt" || kind == "codec") {
        e.kind = kind == "debt" ? EngineKind::Debt : EngineKind::Codec;
        if (!arg.empty()) {
            try {
                e.mode = parse_mode(arg);
            } catch (const ContractError&) {
                throw ContractError("engine '" + s + "': unknown mode '" + arg + "'");
            }
        }
    } else if (kind == "baseline") {
        e.kind = EngineKind::Baseline;
        e.baseline = arg;
        baseline_by_name(arg);
    } else {
        throw ContractError("unknown engine '" + s + "' (expected debt:<mode>, codec:<mode> or baseline:<name>)");
    }
    return e;
}

std::string Engine::label() const {
    switch (kind) {
    case EngineKind::Debt: return "debt" + (mode ? ":" + to_string(*mode) : std::string());
    case EngineKind::Codec: return "codec" + (mode ? ":" + to_string(*mode) : std::string());
    case EngineKind::Baseline: return "baseline:" + baseline;
    }
    return "?";
}

namespace {

CodeParams effective(const CodeParams& p, const Engine& e) {
    CodeParams out = p;
    if (e.mode) out.mode = *e.mode;
    return out;
}

RoundCounts run_debt_round(const ChannelSpec& spec, const CodeParams& p, std::int64_t T, std::uint64_t seed) {
    RoundCounts rc;
    TraceSampler sampler(spec, seed);
    DebtTracker tracker(p);
    const bool terms = p.mode == Mode::Nonsystematic && !p.infinite_memory();
    bool burn_in = true;  // the first cycle starts from the plain stationary state, not a restart
    for (std::int64_t t = 1; t <= T; ++t) {
        if (!tracker.push(sampler.next())) continue;
        if (burn_in) {
            burn_in = false;
            continue;
        }
        const Cycle& c = tracker.cycle();
        rc.slots += c.end - c.start;
        rc.errors += tracker.errors();
        ++rc.cycles;
        if (terms) {
            const CycleTerms ct = cycle_terms(c, p);
            rc.lg += ct.lg;
            rc.lb1 += ct.lb1;
            rc.lb2 += ct.lb2;
        }
    }
    return rc;
}

// Counts over slots between the first and the last instant with nothing left
// undecoded, mirroring the debt engine's burn-in and final-cycle exclusion.
RoundCounts count_decoded(const std::vector<std::int64_t>& decoded_at, const std::vector<std::int64_t>& clean_at,
                          int delay) {
    RoundCounts rc;
    if (clean_at.size() < 2) return rc;
    const std::int64_t first = clean_at.front(), last = clean_at.back();
    rc.slots = last - first;
    rc.cycles = static_cast<std::int64_t>(clean_at.size()) - 1;
    for (std::int64_t u = first + 1; u <= last; ++u) {
        const std::int64_t d = decoded_at[u];
        if (d < 0 || d > u + delay) ++rc.errors;
    }
    return rc;
}

} // namespace

RoundCounts run_round(const ChannelSpec& spec, const CodeParams& params, const Engine& engine, std::int64_t T,
                      std::uint64_t seed) {
    const CodeParams p = effective(params, engine);
    p.validate();
    require(spec.N() == p.N, "simulation: channel N differs from code N");
    if (p.mode == Mode::SystematicPec) require(spec.packet_mode, "systematic codes need a packet erasure channel");
    switch (engine.kind) {
    case EngineKind::Debt: return run_debt_round(spec, p, T, seed);
    case EngineKind::Codec: {
        require(!p.infinite_memory(), "codec engine needs finite memory alpha");
        const GeneratorSchedule g(p, engine.q, derive_seed(seed, 0xc0dec));
        const Trace trace = sample_trace(spec, T, seed);
        const DecodeRun run = run_decoder(g, trace, p.delta);
        return count_decoded(run.decoded_at, run.clean_at, p.delta);
    }
    case EngineKind::Baseline: {
        require(spec.packet_mode, "baseline codes need a packet erasure channel");
        const BaselineCode& code = baseline_by_name(engine.baseline);
        const Trace trace = sample_trace(spec, T, seed);
        const BaselineRun run = run_baseline(code, trace, p.delta);
        return count_decoded(run.decoded_at, run.clean_at, p.delta);
    }
    }
    throw ContractError("unknown engine");
}

PeEstimate aggregate(const std::vector<RoundCounts>& rounds, const std::string& engine, std::int64_t T,
                     std::uint64_t seed) {
    PeEstimate e;
    e.engine = engine;
    e.rounds = static_cast<int>(rounds.size());
    e.T = T;
    e.seed = seed;
    e.per_round = rounds;
    for (const auto& r : rounds) {
        e.slots += r.slots;
        e.errors += r.errors;
        e.cycles += r.cycles;
    }
    if (e.slots > 0) e.pe_hat = static_cast<double>(e.errors) / static_cast<double>(e.slots);
    if (e.cycles > 0) {
        e.E_interval_hat = static_cast<double>(e.slots) / static_cast<double>(e.cycles);
        e.E_errors_per_cycle_hat = static_cast<double>(e.errors) / static_cast<double>(e.cycles);
    }
    if (rounds.size() >= 2) {
        double mean = 0.0;
        for (const auto& r : rounds) mean += r.pe();
        mean /= static_cast<double>(rounds.size());
        double var = 0.0;
        for (const auto& r : rounds) var += (r.pe() - mean) * (r.pe() - mean);
        var /= static_cast<double>(rounds.size() - 1);
        e.ci_halfwidth = 1.96 * std::sqrt(var / static_cast<double>(rounds.size()));
    }
    e.ci_low = std::max(0.0, e.pe_hat - e.ci_halfwidth);
    e.ci_high = std::min(1.0, e.pe_hat + e.ci_halfwidth);
    return e;
}

PeEstimate estimate_pe(const ChannelSpec& spec, const CodeParams& params, const SimOptions& opts,
                       const Engine& engine) {
    require(opts.T >= 1, "simulation: T must be >= 1");
    require(opts.rounds >= 1, "simulation: rounds must be >= 1");
    std::vector<RoundCounts> rounds(static_cast<std::size_t>(opts.rounds));
    const int workers = std::clamp(opts.threads, 1, opts.rounds);
    if (workers == 1) {
        for (int i = 0; i < opts.rounds; ++i)
            rounds[i] = run_round(spec, params, engine, opts.T, derive_seed(opts.seed, static_cast<std::uint64_t>(i)));
    } else {
        std::atomic<int> next{0};
        std::exception_ptr failure;
        std::mutex m;
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (int i = next++; i < opts.rounds; i = next++) {
                    try {
                        rounds[i] = run_round(spec, params, engine, opts.T,
                                              derive_seed(opts.seed, static_cast<std::uint64_t>(i)));
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(m);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
        for (auto& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
    }
    return aggregate(rounds, engine.label(), opts.T, opts.seed);
}

RenewalStats renewal_stats(const std::vector<DebtTrajectory>& batch, const CodeParams& p) {
    require(p.mode == Mode::Nonsystematic && !p.infinite_memory(), "renewal_stats: needs finite-memory NRLSC");
    RenewalStats s;
    double len = 0, lg = 0, lb1 = 0, lb2 = 0, err = 0;
    for (const auto& traj : batch) {
        const std::vector<Cycle> cycles = traj.cycles();
        for (std::size_t i = 1; i < cycles.size(); ++i) {  // first cycle is burn-in
            const Cycle& c = cycles[i];
            const CycleTerms t = cycle_terms(c, p);
            ++s.cycles;
            len += static_cast<double>(t.length);
            lg += static_cast<double>(t.lg);
            lb1 += static_cast<double>(t.lb1);
            lb2 += static_cast<double>(t.lb2);
            err += static_cast<double>(std::max<std::int64_t>(0, error_bound(c, p) - c.start - 1));
        }
    }
    if (s.cycles == 0) return s;
    const double n = static_cast<double>(s.cycles);
    s.E_interval = len / n;
    s.E_LG = lg / n;
    s.E_LB1 = lb1 / n;
    s.E_LB2 = lb2 / n;
    s.E_errors = err / n;
    return s;
}

RenewalStats renewal_stats(const std::vector<RoundCounts>& rounds) {
    RenewalStats s;
    double len = 0, lg = 0, lb1 = 0, lb2 = 0, err = 0;
    for (const auto& r : rounds) {
        s.cycles += r.cycles;
        len += static_cast<double>(r.slots);
        lg += static_cast<double>(r.lg);
        lb1 += static_cast<double>(r.lb1);
        lb2 += static_cast<double>(r.lb2);
        err += static_cast<double>(r.errors);
    }
    if (s.cycles == 0) return s;
    const double n = static_cast<double>(s.cycles);
    s.E_interval = len / n;
    s.E_LG = lg / n;
    s.E_LB1 = lb1 / n;
    s.E_LB2 = lb2 / n;
    s.E_errors = err / n;
    return s;
}

std::optional<double> analytic_pe(const Scenario& s, const Engine& engine) {
    if (engine.kind == EngineKind::Baseline) return std::nullopt;
    const CodeParams p = effective(s.code, engine);
    if (p.mode == Mode::Nonsystematic) {
        if (p.infinite_memory()) return std::nullopt;
        const DebtChain c = DebtChain::build(p, s.channel);
        return pe_nrlsc(c, stationary_initial(c), p.delta, *p.alpha);
    }
    if (!p.infinite_memory() || p.N != 2 * p.K || !s.channel.packet_mode) return std::nullopt;
    // Needs an i.i.d. channel: every state emits alike.
    for (const auto& e : s.channel.emissions)
        if (e.pmf != s.channel.emissions.front().pmf) return std::nullopt;
    const double delivery = 1.0 - s.channel.emissions.front().erasure_probability();
    return pe_srlsc_infinite(delivery, p.delta).pe;
}

std::vector<SweepRow> sweep(const ScenarioFactory& make, const std::string& axis, const std::vector<double>& values,
                            const std::vector<Engine>& engines, const SimOptions& opts) {
    std::vector<SweepRow> rows;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const Scenario s = make(values[i]);
        SimOptions o = opts;
        o.seed = derive_seed(opts.seed, i);
        for (const Engine& e : engines) {
            SweepRow r;
            r.axis = axis;
            r.value = values[i];
            r.estimate = estimate_pe(s.channel, s.code, o, e);
            r.analytic = analytic_pe(s, e);
            rows.push_back(std::move(r));
        }
    }
    return rows;
}

} // namespace rlsc
