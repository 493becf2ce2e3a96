#include <doctest.h>

#include <algorithm>
#include <set>

#include "rlsc/channels.hpp"
#include "rlsc/debt.hpp"
#include "rlsc/errors.hpp"

using namespace rlsc;

namespace {

CodeParams example_code(Mode m) {
    CodeParams p;
    p.K = 1;
    p.N = 2;
    p.alpha = 3;
    p.delta = 6;
    p.mode = m;
    return p;
}

Trace example_trace() { return trace_from_erasures(2, 20, {1, 2, 3, 6}); }

} // namespace

TEST_CASE("mode names round-trip") {
    CHECK(parse_mode(to_string(Mode::Nonsystematic)) == Mode::Nonsystematic);
    CHECK(parse_mode(to_string(Mode::SystematicPec)) == Mode::SystematicPec);
    CHECK_THROWS_AS(parse_mode("bogus"), ContractError);
}

TEST_CASE("ceiling is alpha*K + 1") {
    CodeParams p;
    p.K = 2;
    p.N = 4;
    p.alpha = 3;
    CHECK(p.zeta() == 7);
    p.alpha.reset();
    CHECK_THROWS_AS(p.zeta(), ContractError);
}

TEST_CASE("parameter validation") {
    CodeParams p;
    p.K = 2;
    p.N = 2;
    CHECK_THROWS_AS(p.validate(), ContractError);
    p.N = 3;
    p.delta = -1;
    CHECK_THROWS_AS(p.validate(), ContractError);
    p.delta = 0;
    p.alpha = 0;
    CHECK_THROWS_AS(p.validate(), ContractError);
    p.alpha = 1;
    CHECK_NOTHROW(p.validate());
}

TEST_CASE("non-systematic step") {
    CodeParams p;
    p.K = 2;
    p.N = 4;
    p.alpha = 2;  // zeta = 5
    CHECK(step_nrlsc(0, 4, p) == 0);
    CHECK(step_nrlsc(0, 0, p) == 2);
    CHECK(step_nrlsc(3, 1, p) == 4);
    CHECK(step_nrlsc(4, 0, p) == 5);  // 2 + min(4, 4) = 6, clipped to 5
    CHECK(step_nrlsc(5, 0, p) == 5);
    CHECK(step_nrlsc(5, 4, p) == 2);  // memory forgets: 2 - 4 + min(5, 4)
    CHECK_THROWS_AS(step_nrlsc(6, 0, p), ContractError);
    CHECK_THROWS_AS(step_nrlsc(0, 5, p), ContractError);
    p.alpha.reset();
    CHECK(step_nrlsc(100, 0, p) == 102);
}

TEST_CASE("small example: non-systematic trajectory") {
    const CodeParams p = example_code(Mode::Nonsystematic);
    const DebtTrajectory traj = run_trajectory(example_trace(), p);
    const std::vector<int> expect = {0, 1, 2, 3, 2, 1, 2, 1, 0};
    for (std::size_t t = 0; t < expect.size(); ++t) CHECK(traj.debt[t] == expect[t]);
    CHECK(traj.ceiling_hits.empty());
    REQUIRE(!traj.zero_hits.empty());
    CHECK(traj.zero_hits.front() == 8);
    // Cycle (0, 8] without a hit: errors are slots 0 < t < 8 - 6.
    CHECK(error_slots_nrlsc(traj, p) == std::vector<std::int64_t>{1});
}

TEST_CASE("small example: systematic trajectory") {
    const CodeParams p = example_code(Mode::SystematicPec);
    const Trace tr = example_trace();
    const DebtTrajectory traj = run_trajectory(tr, p);
    const std::vector<int> debt = {0, 1, 2, 3, 2, 1, 2, 0};
    const std::vector<int> ceil = {1, 2, 3, 4, 3, 2, 2, 1};
    for (std::size_t t = 0; t < debt.size(); ++t) {
        CHECK(traj.debt[t] == debt[t]);
        CHECK(traj.ceiling[t] == ceil[t]);
    }
    CHECK(traj.ceiling_hits == std::vector<std::int64_t>{6});
    CHECK(traj.zero_hits.front() == 7);
    // Hit at 6: bound max(6 - 3 + 1, 7 - 6) = 4, erased slots below it.
    CHECK(error_slots_srlsc(traj, tr, p) == std::vector<std::int64_t>{1, 2, 3});
}

TEST_CASE("error bound and cycle terms") {
    CodeParams p;
    p.K = 1;
    p.N = 2;
    p.alpha = 3;
    p.delta = 2;
    const Cycle free{10, 20, std::nullopt};
    CHECK(error_bound(free, p) == 18);
    const CycleTerms a = cycle_terms(free, p);
    CHECK(a.length == 10);
    CHECK(a.lg == 7);
    CHECK(a.lb1 + a.lb2 == 0);

    const Cycle hit{10, 20, 19};
    CHECK(error_bound(hit, p) == 18);
    const Cycle early{10, 40, 38};
    p.delta = 20;
    CHECK(error_bound(early, p) == 36);
    const CycleTerms b = cycle_terms(early, p);
    CHECK(b.lb1 == 28);
    CHECK(b.lb2 == -3);
}

TEST_CASE("tracker agrees with trajectory error slots") {
    const auto ch = ChannelSpec::gilbert_elliott(0.05, 0.3, EmissionModel::binomial(4, 0.8),
                                                 EmissionModel::binomial(4, 0.1));
    const Trace tr = sample_trace(ch, 50000, 3);
    CodeParams p;
    p.K = 2;
    p.N = 4;
    p.alpha = 3;
    p.delta = 2;
    const DebtTrajectory traj = run_trajectory(tr, p);
    const auto slots = error_slots_nrlsc(traj, p);

    DebtTracker tracker(p);
    std::int64_t total = 0;
    std::int64_t lg = 0, lb = 0;
    for (std::int64_t t = 1; t <= tr.length(); ++t)
        if (tracker.push(tr.received[t])) {
            total += tracker.errors();
            const CycleTerms c = cycle_terms(tracker.cycle(), p);
            lg += c.lg;
            lb += std::max<std::int64_t>(0, c.lb1 + c.lb2);
        }
    CHECK(total == static_cast<std::int64_t>(slots.size()));
    CHECK(total == lg + lb);
    CHECK(total > 0);
}

TEST_CASE("systematic ceiling counts the window erasures") {
    const auto ch = ChannelSpec::gilbert_elliott(0.05, 0.3, EmissionModel::packet(4, 0.9),
                                                 EmissionModel::packet(4, 0.0));
    const Trace tr = sample_trace(ch, 100000, 17);
    for (int alpha : {1, 3, 6}) {
        CodeParams p;
        p.K = 2;
        p.N = 4;
        p.alpha = alpha;
        p.delta = 3;
        p.mode = Mode::SystematicPec;
        const DebtTrajectory traj = run_trajectory(tr, p);
        for (std::int64_t t = 1; t <= tr.length(); ++t) {
            const std::int64_t from = std::max<std::int64_t>(t - alpha, traj.last_zero[t]);
            int erased = 0;
            for (std::int64_t u = from + 1; u <= t; ++u) erased += traj.erasure[u];
            REQUIRE(traj.ceiling[t] - 1 == p.K * erased);
            REQUIRE(traj.debt[t] <= traj.ceiling[t]);
        }
    }
}

TEST_CASE("infinite memory never hits a ceiling") {
    const Trace tr = sample_trace(ChannelSpec::iid(EmissionModel::packet(10, 0.55)), 100000, 8);
    CodeParams p;
    p.K = 5;
    p.N = 10;
    p.alpha.reset();
    p.delta = 4;
    p.mode = Mode::SystematicPec;
    const DebtTrajectory traj = run_trajectory(tr, p);
    CHECK(traj.ceiling_hits.empty());
    CHECK_NOTHROW(error_slots_srlsc_infinite(traj, tr, p));
}

TEST_CASE("error sets shrink as the delay grows") {
    const auto ch = ChannelSpec::gilbert_elliott(0.02, 0.4, EmissionModel::packet(6, 0.8),
                                                 EmissionModel::packet(6, 0.0));
    const Trace tr = sample_trace(ch, 30000, 4);
    for (Mode m : {Mode::Nonsystematic, Mode::SystematicPec}) {
        std::set<std::int64_t> prev;
        for (int delta = 0; delta <= 10; ++delta) {
            CodeParams p;
            p.K = 3;
            p.N = 6;
            p.alpha = 5;
            p.delta = delta;
            p.mode = m;
            const DebtTrajectory traj = run_trajectory(tr, p);
            const auto v = m == Mode::Nonsystematic ? error_slots_nrlsc(traj, p) : error_slots_srlsc(traj, tr, p);
            const std::set<std::int64_t> cur(v.begin(), v.end());
            if (delta > 0) REQUIRE(std::includes(prev.begin(), prev.end(), cur.begin(), cur.end()));
            prev = cur;
        }
    }
}

TEST_CASE("systematic codes err only on erased slots") {
    const auto ch = ChannelSpec::gilbert_elliott(0.02, 0.4, EmissionModel::packet(6, 0.8),
                                                 EmissionModel::packet(6, 0.0));
    const Trace tr = sample_trace(ch, 30000, 9);
    CodeParams p;
    p.K = 3;
    p.N = 6;
    p.alpha = 5;
    p.delta = 4;
    p.mode = Mode::SystematicPec;
    const auto sys = error_slots_srlsc(run_trajectory(tr, p), tr, p);
    for (auto u : sys) REQUIRE(tr.erased(u));
}

TEST_CASE("full delivery gives zero debt") {
    const Trace tr = sample_trace(ChannelSpec::iid(EmissionModel::binomial(4, 1.0)), 1000, 1);
    CodeParams p;
    p.K = 2;
    p.N = 4;
    p.alpha = 2;
    const DebtTrajectory traj = run_trajectory(tr, p);
    CHECK(std::all_of(traj.debt.begin(), traj.debt.end(), [](int d) { return d == 0; }));
    CHECK(traj.zero_hits.size() == 1000);
    CHECK(error_slots_nrlsc(traj, p).empty());
}

TEST_CASE("systematic mode rejects symbol-level traces") {
    const Trace tr = sample_trace(ChannelSpec::iid(EmissionModel::binomial(4, 0.5)), 100, 1);
    CodeParams p;
    p.K = 2;
    p.N = 4;
    p.alpha = 2;
    p.mode = Mode::SystematicPec;
    CHECK_THROWS_AS(run_trajectory(tr, p), ContractError);
}
