#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rlsc/channels.hpp"

namespace rlsc {

enum class Mode { Nonsystematic, SystematicPec };

std::string to_string(Mode m);
Mode parse_mode(const std::string& s);

struct CodeParams {
    int K = 1;
    int N = 2;
    std::optional<int> alpha;  // std::nullopt means infinite memory
    int delta = 0;
    Mode mode = Mode::Nonsystematic;

    bool infinite_memory() const { return !alpha.has_value(); }
    // Debt ceiling alpha*K + 1 (finite memory only).
    int zeta() const;
    void validate() const;
};

// Non-systematic debt update: min(zeta, (K - C_t + min(prev, alpha*K))^+).
int step_nrlsc(int prev_debt, int received, const CodeParams& p);

struct SrlscState {
    int debt = 0;
    int ceiling = 1;
    std::int64_t last_zero = 0;
};

// Systematic packet-mode debt update for slot t. e_edge is e(max(t - alpha, t_c)),
// the flag leaving the erasure window (ignored for infinite memory).
SrlscState step_srlsc(const SrlscState& prev, std::int64_t t, int e_edge, int e_t, const CodeParams& p);

// One debt cycle (start, end]: I_d(start) = I_d(end) = 0, positive in between.
struct Cycle {
    std::int64_t start = 0;
    std::int64_t end = 0;
    std::optional<std::int64_t> last_hit;  // latest ceiling hit inside the cycle
};

// Exclusive upper end b of the error interval: slots start < t < b are in error
// (for systematic codes only those with e(t) = 1).
std::int64_t error_bound(const Cycle& c, const CodeParams& p);

// Cycle statistics whose ratio gives the long-run slot error probability.
struct CycleTerms {
    std::int64_t length = 0;
    std::int64_t lg = 0;   // no ceiling hit: (end - delta - 1 - start)^+
    std::int64_t lb1 = 0;  // ceiling hit: last_hit - start
    std::int64_t lb2 = 0;  // ceiling hit: max(-alpha, end - delta - 1 - last_hit)
};
CycleTerms cycle_terms(const Cycle& c, const CodeParams& p);

// Streaming debt evolution for either code family.
class DebtTracker {
public:
    explicit DebtTracker(const CodeParams& p);

    // Consumes slot t = slot() + 1. Returns true when the debt returns to zero,
    // closing cycle(); errors() then holds its error-slot count.
    bool push(int received);

    std::int64_t slot() const { return t_; }
    int debt() const { return state_.debt; }
    int ceiling() const { return state_.ceiling; }
    std::int64_t last_zero() const { return state_.last_zero; }
    bool at_ceiling() const { return at_ceiling_; }
    const Cycle& cycle() const { return cycle_; }
    std::int64_t errors() const { return errors_; }

private:
    CodeParams p_;
    bool systematic_;
    std::int64_t t_ = 0;
    SrlscState state_;
    bool at_ceiling_ = false;
    Cycle open_;
    Cycle cycle_;
    std::int64_t errors_ = 0;
    std::vector<std::uint8_t> window_;        // e(t) for the last alpha + 1 slots
    std::vector<std::uint8_t> cycle_erasure_;  // e(t) for slots of the open cycle
};

struct DebtTrajectory {
    std::vector<int> debt;                 // I_d(t), t = 0..T
    std::vector<int> ceiling;              // zeta(t)
    std::vector<std::int64_t> last_zero;   // t_c after slot t
    std::vector<std::uint8_t> erasure;     // e(t)
    std::vector<std::int64_t> zero_hits;   // t_1 < t_2 < ...
    std::vector<std::int64_t> ceiling_hits;

    std::int64_t length() const { return static_cast<std::int64_t>(debt.size()) - 1; }
    // Complete cycles in order; slots after the last zero hit are not covered.
    std::vector<Cycle> cycles() const;
};

DebtTrajectory run_trajectory(const Trace& trace, const CodeParams& p);

std::vector<std::int64_t> error_slots_nrlsc(const DebtTrajectory& traj, const CodeParams& p);
std::vector<std::int64_t> error_slots_srlsc(const DebtTrajectory& traj, const Trace& trace, const CodeParams& p);
std::vector<std::int64_t> error_slots_srlsc_infinite(const DebtTrajectory& traj, const Trace& trace,
                                                     const CodeParams& p);

} // namespace rlsc
