#include "rlsc/debt.hpp"

#include <algorithm>

#include "rlsc/errors.hpp"

namespace rlsc {

std::string to_string(Mode m) {
    return m == Mode::Nonsystematic ? "nonsystematic" : "systematic";
}

Mode parse_mode(const std::string& s) {
    if (s == "nonsystematic" || s == "nrlsc") return Mode::Nonsystematic;
    if (s == "systematic" || s == "srlsc") return Mode::SystematicPec;
    throw ContractError("unknown code mode '" + s + "'");
}

int CodeParams::zeta() const {
    require(alpha.has_value(), "zeta is undefined for infinite memory");
    return *alpha * K + 1;
}

void CodeParams::validate() const {
    require(K >= 1, "code: K must be >= 1");
    require(N > K, "code: N must exceed K");
    require(delta >= 0, "code: delta must be >= 0");
    if (alpha) require(*alpha >= 1, "code: alpha must be >= 1");
}

int step_nrlsc(int prev_debt, int received, const CodeParams& p) {
    require(received >= 0 && received <= p.N, "step_nrlsc: received count out of range");
    if (p.infinite_memory()) {
        require(prev_debt >= 0, "step_nrlsc: negative debt");
        return std::max(0, p.K - received + prev_debt);
    }
    const int z = p.zeta();
    require(prev_debt >= 0 && prev_debt <= z, "step_nrlsc: previous debt out of range");
    const int raw = std::max(0, p.K - received + std::min(prev_debt, *p.alpha * p.K));
    return std::min(z, raw);
}

SrlscState step_srlsc(const SrlscState& prev, std::int64_t t, int e_edge, int e_t, const CodeParams& p) {
    require(e_t == 0 || e_t == 1, "step_srlsc: erasure flag must be 0 or 1");
    require(prev.ceiling >= 1 && prev.debt >= 0 && prev.debt <= prev.ceiling, "step_srlsc: invalid previous state");
    const int raw = std::max(0, p.K - p.N * (1 - e_t) + std::min(prev.debt, prev.ceiling - 1));
    SrlscState next;
    if (raw == 0) {
        next.ceiling = 1;
    } else if (p.infinite_memory()) {
        next.ceiling = prev.ceiling + p.K * e_t;
    } else {
        next.ceiling = prev.ceiling + p.K * e_t - p.K * e_edge;
    }
    next.debt = std::min(next.ceiling, raw);
    next.last_zero = next.debt == 0 ? t : prev.last_zero;
    return next;
}

std::int64_t error_bound(const Cycle& c, const CodeParams& p) {
    const std::int64_t late = c.end - p.delta;
    if (!c.last_hit) return late;
    require(p.alpha.has_value(), "error_bound: ceiling hit with infinite memory");
    return std::max(*c.last_hit - *p.alpha + 1, late);
}

CycleTerms cycle_terms(const Cycle& c, const CodeParams& p) {
    CycleTerms r;
    r.length = c.end - c.start;
    if (!c.last_hit) {
        r.lg = std::max<std::int64_t>(0, c.end - p.delta - 1 - c.start);
    } else {
        r.lb1 = *c.last_hit - c.start;
        r.lb2 = std::max<std::int64_t>(-*p.alpha, c.end - p.delta - 1 - *c.last_hit);
    }
    return r;
}

DebtTracker::DebtTracker(const CodeParams& p) : p_(p), systematic_(p.mode == Mode::SystematicPec) {
    p_.validate();
    if (!systematic_ && !p_.infinite_memory()) state_.ceiling = p_.zeta();
    if (systematic_ && !p_.infinite_memory()) window_.assign(*p_.alpha + 1, 0);
}

bool DebtTracker::push(int received) {
    ++t_;
    const int e = received < p_.N ? 1 : 0;
    if (systematic_) {
        require(received == 0 || received == p_.N, "systematic debt requires packet-mode slots");
        int e_edge = 0;
        if (!p_.infinite_memory()) {
            const auto ring = static_cast<std::int64_t>(window_.size());
            const std::int64_t u = t_ - *p_.alpha;
            if (u > state_.last_zero) {
                e_edge = window_[u % ring];
            } else if (state_.last_zero > 0 && window_[state_.last_zero % ring] != 0) {
                throw NumericalError("systematic debt: zero-debt slot " + std::to_string(state_.last_zero) +
                                     " is marked erased");
            }
            window_[t_ % ring] = static_cast<std::uint8_t>(e);
        }
        state_ = step_srlsc(state_, t_, e_edge, e, p_);
        at_ceiling_ = state_.debt > 0 && state_.debt == state_.ceiling;
    } else {
        state_.debt = step_nrlsc(state_.debt, received, p_);
        if (state_.debt == 0) state_.last_zero = t_;
        at_ceiling_ = !p_.infinite_memory() && state_.debt == state_.ceiling;
    }
    cycle_erasure_.push_back(static_cast<std::uint8_t>(e));
    if (at_ceiling_) open_.last_hit = t_;
    if (state_.debt != 0) return false;

    cycle_ = {open_.start, t_, open_.last_hit};
    const std::int64_t b = error_bound(cycle_, p_);
    errors_ = 0;
    for (std::int64_t u = cycle_.start + 1; u < b; ++u)
        if (!systematic_ || cycle_erasure_[u - cycle_.start - 1]) ++errors_;
    open_ = {t_, 0, std::nullopt};
    cycle_erasure_.clear();
    return true;
}

std::vector<Cycle> DebtTrajectory::cycles() const {
    std::vector<Cycle> out;
    out.reserve(zero_hits.size());
    std::int64_t start = 0;
    std::size_t h = 0;
    for (auto end : zero_hits) {
        Cycle c{start, end, std::nullopt};
        while (h < ceiling_hits.size() && ceiling_hits[h] <= end) c.last_hit = ceiling_hits[h++];
        out.push_back(c);
        start = end;
    }
    return out;
}

DebtTrajectory run_trajectory(const Trace& trace, const CodeParams& p) {
    if (p.mode == Mode::SystematicPec) require(trace.packet_mode, "run_trajectory: systematic mode needs a packet trace");
    require(trace.N == p.N, "run_trajectory: trace N differs from code N");
    const std::int64_t T = trace.length();
    DebtTrajectory traj;
    traj.debt.assign(T + 1, 0);
    traj.ceiling.assign(T + 1, p.mode == Mode::Nonsystematic && !p.infinite_memory() ? p.zeta() : 1);
    traj.last_zero.assign(T + 1, 0);
    traj.erasure.assign(T + 1, 0);
    DebtTracker tracker(p);
    for (std::int64_t t = 1; t <= T; ++t) {
        const bool closed = tracker.push(trace.received[t]);
        traj.debt[t] = tracker.debt();
        traj.ceiling[t] = tracker.ceiling();
        traj.last_zero[t] = tracker.last_zero();
        traj.erasure[t] = trace.erased(t) ? 1 : 0;
        if (closed) traj.zero_hits.push_back(t);
        if (tracker.at_ceiling()) traj.ceiling_hits.push_back(t);
    }
    return traj;
}

namespace {

std::vector<std::int64_t> collect(const DebtTrajectory& traj, const CodeParams& p, const Trace* erased_only) {
    std::vector<std::int64_t> out;
    for (const auto& c : traj.cycles()) {
        const std::int64_t b = error_bound(c, p);
        for (std::int64_t u = c.start + 1; u < b; ++u)
            if (!erased_only || erased_only->erased(u)) out.push_back(u);
    }
    return out;
}

} // namespace

std::vector<std::int64_t> error_slots_nrlsc(const DebtTrajectory& traj, const CodeParams& p) {
    require(p.mode == Mode::Nonsystematic, "error_slots_nrlsc: non-systematic parameters required");
    return collect(traj, p, nullptr);
}

std::vector<std::int64_t> error_slots_srlsc(const DebtTrajectory& traj, const Trace& trace, const CodeParams& p) {
    require(p.mode == Mode::SystematicPec, "error_slots_srlsc: systematic parameters required");
    require(trace.packet_mode, "error_slots_srlsc: packet trace required");
    return collect(traj, p, &trace);
}

std::vector<std::int64_t> error_slots_srlsc_infinite(const DebtTrajectory& traj, const Trace& trace,
                                                     const CodeParams& p) {
    require(p.infinite_memory(), "error_slots_srlsc_infinite: infinite memory required");
    require(traj.ceiling_hits.empty(), "error_slots_srlsc_infinite: ceiling hit with infinite memory");
    return error_slots_srlsc(traj, trace, p);
}

} // namespace rlsc
