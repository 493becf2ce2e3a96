#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rlsc/channels.hpp"
#include "rlsc/debt.hpp"

namespace rlsc {

enum class EngineKind { Debt, Codec, Baseline };

// How error slots are obtained: the debt characterization, the real random
// linear codec, or one of the deterministic baseline codes.
struct Engine {
    EngineKind kind = EngineKind::Debt;
    std::optional<Mode> mode;  // overrides the code mode when set
    std::string baseline;      // baseline code name
    int q = 16;                // codec field GF(2^q)

    // "debt:nonsystematic", "codec:systematic", "baseline:k3n6", ...
    static Engine parse(const std::string& s);
    std::string label() const;
};

struct SimOptions {
    std::int64_t T = 100000;
    int rounds = 10;
    std::uint64_t seed = 1;
    int threads = 1;
};

// Error and cycle counts of one round, over complete renewal cycles only.
struct RoundCounts {
    std::int64_t slots = 0;
    std::int64_t errors = 0;
    std::int64_t cycles = 0;
    std::int64_t lg = 0;
    std::int64_t lb1 = 0;
    std::int64_t lb2 = 0;
    double pe() const { return slots > 0 ? static_cast<double>(errors) / slots : 0.0; }
};

struct PeEstimate {
    std::string engine;
    double pe_hat = 0.0;  // pooled error slots / pooled slots
    double ci_low = 0.0;
    double ci_high = 0.0;
    double ci_halfwidth = 0.0;
    std::int64_t cycles = 0;
    std::int64_t slots = 0;
    std::int64_t errors = 0;
    double E_interval_hat = 0.0;
    double E_errors_per_cycle_hat = 0.0;
    int rounds = 0;
    std::int64_t T = 0;
    std::uint64_t seed = 0;
    std::vector<RoundCounts> per_round;
};

// Aggregates rounds in index order so the result does not depend on threading.
PeEstimate aggregate(const std::vector<RoundCounts>& rounds, const std::string& engine, std::int64_t T,
                     std::uint64_t seed);

// One round: samples T slots with the given seed and counts errors.
RoundCounts run_round(const ChannelSpec& spec, const CodeParams& params, const Engine& engine, std::int64_t T,
                      std::uint64_t seed);

// Round i uses derive_seed(opts.seed, i).
PeEstimate estimate_pe(const ChannelSpec& spec, const CodeParams& params, const SimOptions& opts,
                       const Engine& engine);

// Empirical per-cycle means of the renewal decomposition.
struct RenewalStats {
    std::int64_t cycles = 0;
    double E_interval = 0.0;
    double E_LG = 0.0;
    double E_LB1 = 0.0;
    double E_LB2 = 0.0;
    double E_errors = 0.0;
};
RenewalStats renewal_stats(const std::vector<DebtTrajectory>& batch, const CodeParams& p);
RenewalStats renewal_stats(const std::vector<RoundCounts>& rounds);

struct Scenario {
    ChannelSpec channel;
    CodeParams code;
};
using ScenarioFactory = std::function<Scenario(double)>;

// Closed-form p_e where one exists: finite-memory non-systematic codes on any
// channel, and the infinite-memory rate-1/2 systematic code on an i.i.d. PEC.
std::optional<double> analytic_pe(const Scenario& s, const Engine& engine);

struct SweepRow {
    std::string axis;
    double value = 0.0;
    PeEstimate estimate;
    std::optional<double> analytic;
};

// Point i runs with seed derive_seed(opts.seed, i); every engine at a point
// sees the same channel traces.
std::vector<SweepRow> sweep(const ScenarioFactory& make, const std::string& axis, const std::vector<double>& values,
                            const std::vector<Engine>& engines, const SimOptions& opts);

} // namespace rlsc
