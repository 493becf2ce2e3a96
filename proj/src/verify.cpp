#include "rlsc/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>

#include <spdlog/fmt/fmt.h>

#include "rlsc/analytic_nrlsc.hpp"
#include "rlsc/analytic_srlsc.hpp"
#include "rlsc/chain.hpp"
#include "rlsc/codec.hpp"
#include "rlsc/debt.hpp"
#include "rlsc/errors.hpp"
#include "rlsc/rng.hpp"
#include "rlsc/sim.hpp"

namespace rlsc {

namespace {

// Pinned tolerances and scales.
constexpr double kRelDevTol = 0.02;
constexpr double kSrlscZeroDelayTol = 1e-6;
constexpr double kOracleTol = 1e-4;
constexpr double kPmfTol = 1e-12;
constexpr int kPmfMaxK = 12;
constexpr double kDegeneracyTol = 1e-9;
constexpr double kToeplitzTol = 1e-4;
constexpr int kToeplitzN = 100000;
constexpr double kAgreementQ16 = 0.999;
constexpr double kStochasticTol = 1e-12;
constexpr double kRestartResidualTol = 1e-10;
constexpr double kMonotoneSlack = 1e-12;
constexpr std::uint64_t kSeed = 20240611;

CriterionResult start(int id, std::string title) {
    CriterionResult r;
    r.id = id;
    r.title = std::move(title);
    return r;
}

struct Checks {
    bool all = true;
    std::vector<std::string> lines;
    void add(bool ok, std::string line) {
        all = all && ok;
        lines.push_back(std::string(ok ? "ok   " : "FAIL ") + line);
    }
};

std::string set_str(const std::vector<std::int64_t>& v) {
    std::string s = "{";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + "}";
}

ChannelSpec section5_channel() {
    return ChannelSpec::gilbert_elliott(1e-4, 0.5, EmissionModel::binomial(10, 0.7), EmissionModel::binomial(10, 0.0));
}

CodeParams code(int K, int N, std::optional<int> alpha, int delta, Mode mode) {
    CodeParams p;
    p.K = K;
    p.N = N;
    p.alpha = alpha;
    p.delta = delta;
    p.mode = mode;
    return p;
}

// Small grid channel: packet emissions, K = 1, N = 2; L = 2 adds a sticky bad state.
ChannelSpec small_channel(double e, int L) {
    if (L == 1) return ChannelSpec::iid(EmissionModel::packet(2, 1.0 - e));
    Eigen::MatrixXd T(2, 2);
    T << 0.9, 0.1, 0.3, 0.7;
    return ChannelSpec(T, {EmissionModel::packet(2, 1.0 - e), EmissionModel::packet(2, 0.2)}, true);
}

ChannelSpec fig5_channel(double loss_g) {
    return ChannelSpec::gilbert_elliott(1e-4, 0.4, EmissionModel::packet(6, 1.0 - loss_g), EmissionModel::packet(6, 0.0));
}

// ---------------------------------------------------------------------------

CriterionResult nrlsc_vs_simulation(const VerifyOptions& o) {
    CriterionResult r = start(1, "NRLSC closed form vs Monte-Carlo");
    Checks c;
    const ChannelSpec ch = section5_channel();
    const CodeParams p = code(5, 10, 4, 5, Mode::Nonsystematic);
    const DebtChain chain = DebtChain::build(p, ch);
    const double theory = pe_nrlsc(chain, stationary_initial(chain), p.delta, *p.alpha);
    std::vector<double> mean_abs_dev;
    double pooled_dev = 0.0;
    for (std::int64_t T : {100000LL, 1000000LL, 10000000LL}) {
        SimOptions so{T, 10, derive_seed(kSeed, 1), o.threads};
        const PeEstimate est = estimate_pe(ch, p, so, Engine{});
        double m = 0.0;
        for (const auto& rc : est.per_round) m += std::abs(theory - rc.pe()) / rc.pe();
        m /= static_cast<double>(est.per_round.size());
        mean_abs_dev.push_back(m);
        pooled_dev = std::abs(theory - est.pe_hat) / est.pe_hat;
        c.lines.push_back(fmt::format("     T={:.0e}: pe_sim={:.6e} ci=[{:.6e},{:.6e}] pooled_dev={:.4f} "
                                      "mean_round_dev={:.4f}",
                                      static_cast<double>(T), est.pe_hat, est.ci_low, est.ci_high, pooled_dev, m));
    }
    c.add(pooled_dev <= kRelDevTol, fmt::format("pooled relative deviation at T=1e7: {:.4f} <= {}", pooled_dev,
                                                kRelDevTol));
    const bool monotone = mean_abs_dev[0] > mean_abs_dev[1] && mean_abs_dev[1] > mean_abs_dev[2];
    c.add(monotone, fmt::format("mean per-round deviation decreasing in T: {:.4f} > {:.4f} > {:.4f}", mean_abs_dev[0],
                                mean_abs_dev[1], mean_abs_dev[2]));
    r.pass = c.all;
    r.summary = fmt::format("pe_theory={:.6e} rel_dev(T=1e7)={:.4f} (tol {}) trend {:.4f}>{:.4f}>{:.4f}", theory,
                            pooled_dev, kRelDevTol, mean_abs_dev[0], mean_abs_dev[1], mean_abs_dev[2]);
    r.details = c.lines;
    return r;
}

CriterionResult srlsc_vs_simulation(const VerifyOptions& o) {
    CriterionResult r = start(2, "SRLSC infinite-memory closed form vs Monte-Carlo");
    Checks c;
    const double p = 0.7;
    const int delta = 5;
    const SrlscInfiniteResult th = pe_srlsc_infinite(p, delta);
    const ChannelSpec ch = ChannelSpec::iid(EmissionModel::packet(10, p));
    const CodeParams cp = code(5, 10, std::nullopt, delta, Mode::SystematicPec);
    const PeEstimate est = estimate_pe(ch, cp, SimOptions{10000000, 10, derive_seed(kSeed, 2), o.threads}, Engine{});
    const double dev = std::abs(th.pe - est.pe_hat) / est.pe_hat;
    c.add(dev <= kRelDevTol, fmt::format("p=0.7 delta=5: theory={:.6e} sim={:.6e} rel_dev={:.5f} <= {}", th.pe,
                                         est.pe_hat, dev, kRelDevTol));
    double worst = 0.0;
    for (double q : {0.6, 0.7, 0.8, 0.9}) worst = std::max(worst, std::abs(pe_srlsc_infinite(q, 0).pe - (1.0 - q)));
    c.add(worst <= kSrlscZeroDelayTol,
          fmt::format("delta=0 gives 1-p for p in {{0.6,0.7,0.8,0.9}}: max err {:.2e}", worst));
    r.pass = c.all;
    r.summary = fmt::format("pe_theory={:.6e} pe_sim={:.6e} rel_dev={:.5f} (tol {}) delta0_err={:.1e}", th.pe,
                            est.pe_hat, dev, kRelDevTol, worst);
    r.details = c.lines;
    return r;
}

CriterionResult oracle_equivalence(const VerifyOptions&) {
    CriterionResult r = start(3, "NRLSC closed form vs exhaustive cycle enumeration");
    Checks c;
    double worst_pe = 0.0, worst_pmf = 0.0;
    int cases = 0;
    for (int L : {1, 2})
        for (int alpha : {1, 2})
            for (double e : {0.1, 0.3, 0.45}) {
                const CodeParams p = code(1, 2, alpha, 0, Mode::Nonsystematic);
                const DebtChain chain = DebtChain::build(p, small_channel(e, L));
                const Eigen::VectorXd pi0 = stationary_initial(chain);
                for (int delta = 0; delta <= 4; ++delta) {
                    const double a = pe_nrlsc(chain, pi0, delta, alpha);
                    const double b = pe_oracle_small(chain, pi0, delta, alpha);
                    worst_pe = std::max(worst_pe, std::abs(a - b));
                    ++cases;
                }
                for (int k = 1; k <= kPmfMaxK; ++k)
                    worst_pmf = std::max(worst_pmf, std::abs(interval_pmf(chain, pi0, k) -
                                                             trace_enumeration_oracle(chain, pi0, k)));
            }
    c.add(worst_pe <= kOracleTol, fmt::format("{} grid points, max |pe - oracle| = {:.3e} <= {}", cases, worst_pe,
                                              kOracleTol));
    c.add(worst_pmf <= kPmfTol, fmt::format("interval pmf vs trace enumeration, k <= {}: max err {:.3e} <= {}",
                                            kPmfMaxK, worst_pmf, kPmfTol));
    r.pass = c.all;
    r.summary = fmt::format("max pe gap {:.2e} (tol {}), max pmf gap {:.2e} (tol {})", worst_pe, kOracleTol,
                            worst_pmf, kPmfTol);
    r.details = c.lines;
    return r;
}

CriterionResult degeneracy(const VerifyOptions&) {
    CriterionResult r = start(4, "Identical-state channel is invariant in (p, r)");
    const CodeParams p = code(5, 10, 4, 5, Mode::Nonsystematic);
    std::vector<double> pes;
    for (auto [a, b] : std::vector<std::pair<double, double>>{{0.1, 0.9}, {0.5, 0.5}, {1e-4, 0.5}}) {
        const ChannelSpec ch =
            ChannelSpec::gilbert_elliott(a, b, EmissionModel::binomial(10, 0.7), EmissionModel::binomial(10, 0.7));
        const DebtChain chain = DebtChain::build(p, ch);
        pes.push_back(pe_nrlsc(chain, stationary_initial(chain), p.delta, *p.alpha));
    }
    const auto [lo, hi] = std::minmax_element(pes.begin(), pes.end());
    const double spread = *hi - *lo;
    r.pass = spread <= kDegeneracyTol;
    r.summary = fmt::format("pe={:.12e} spread={:.2e} (tol {})", pes[0], spread, kDegeneracyTol);
    return r;
}

CriterionResult catalan_suite(const VerifyOptions&) {
    CriterionResult r = start(5, "Lattice-path counts and cycle-length spectral sum");
    Checks c;
    const std::vector<std::int64_t> expect = {14, 14, 9, 9, 7, 7, 5, 5, 0, 0};
    std::vector<std::int64_t> got;
    for (int j = 1; j <= 10; ++j) got.push_back(nup_oracle(5, j));
    c.add(got == expect, "up-step counts for l=5: " + set_str(got));
    bool sums = true, rec = true;
    for (int l = 1; l <= 9; ++l) {
        const auto recursion = nup_recursion(l);
        std::int64_t acc = 0;
        for (int j = 1; j <= 2 * l; ++j) {
            const std::int64_t o = nup_oracle(l, j);
            rec = rec && recursion[j] == o;
            acc += o;
            const int delta = 2 * l - 1 - j;  // the sum up to j = 2l - delta - 1
            if (delta >= 0 && 2 * l >= delta + 2) sums = sums && nup_sum(l, delta) == acc;
        }
    }
    c.add(sums, "closed-form up-step sums match the path oracle for l <= 9");
    c.add(rec, "odd-step decrement recursion matches the path oracle for l <= 9");
    double worst = 0.0;
    for (double p : {0.6, 0.7, 0.8})
        worst = std::max(worst, std::abs(expected_interval_truncated(p, kToeplitzN) - expected_interval_integral(p)));
    c.add(worst <= kToeplitzTol, fmt::format("|truncated(1e5) - integral| max {:.3e} <= {}", worst, kToeplitzTol));
    r.pass = c.all;
    r.summary = fmt::format("counts {} sums {} recursion {} spectral gap {:.2e} (tol {})",
                            got == expect ? "ok" : "FAIL", sums ? "ok" : "FAIL", rec ? "ok" : "FAIL", worst,
                            kToeplitzTol);
    r.details = c.lines;
    return r;
}

CriterionResult example_one(const VerifyOptions&) {
    CriterionResult r = start(6, "Worked example through the real codec");
    Checks c;
    const Trace tr = trace_from_erasures(2, 20, {1, 2, 3, 6});
    const std::vector<std::int64_t> want_sys = {1, 2, 3}, want_ns = {1, 2};
    std::vector<std::int64_t> got[2], debt[2];
    for (int m = 0; m < 2; ++m) {
        const Mode mode = m == 0 ? Mode::SystematicPec : Mode::Nonsystematic;
        const CodeParams p = code(1, 2, 3, 6, mode);
        got[m] = codec_error_slots(GeneratorSchedule(p, 16, kSeed), tr, p.delta);
        const DebtTrajectory traj = run_trajectory(tr, p);
        debt[m] = mode == Mode::SystematicPec ? error_slots_srlsc(traj, tr, p) : error_slots_nrlsc(traj, p);
    }
    c.add(got[0] == want_sys, "systematic codec errors " + set_str(got[0]) + ", expected " + set_str(want_sys));
    c.add(got[1] == want_ns, "non-systematic codec errors " + set_str(got[1]) + ", expected " + set_str(want_ns));
    c.add(debt[0] == got[0], "systematic debt errors " + set_str(debt[0]) + " match the codec");
    c.add(debt[1] == got[1], "non-systematic debt errors " + set_str(debt[1]) + " match the codec");
    r.pass = c.all;
    r.summary = fmt::format("systematic codec {} debt {}; non-systematic codec {} debt {} (expected {} and {})",
                            set_str(got[0]), set_str(debt[0]), set_str(got[1]), set_str(debt[1]), set_str(want_sys),
                            set_str(want_ns));
    r.details = c.lines;
    return r;
}

struct Agreement {
    std::int64_t compared = 0;
    std::int64_t disagree = 0;
};

Agreement debt_vs_codec(const CodeParams& p, const Trace& tr, int q, std::uint64_t seed) {
    const DebtTrajectory traj = run_trajectory(tr, p);
    const auto debt = p.mode == Mode::SystematicPec ? error_slots_srlsc(traj, tr, p) : error_slots_nrlsc(traj, p);
    const std::set<std::int64_t> derr(debt.begin(), debt.end());
    const auto rep = decodability_report(GeneratorSchedule(p, q, seed), tr, p.delta);
    Agreement a;
    if (traj.zero_hits.empty()) return a;
    const std::int64_t last = std::min(traj.zero_hits.back(), tr.length() - p.delta);
    for (std::int64_t u = 1; u <= last; ++u) {
        ++a.compared;
        if ((rep[u] == 0) != (derr.count(u) > 0)) ++a.disagree;
    }
    return a;
}

CriterionResult debt_rank_equivalence(const VerifyOptions&) {
    CriterionResult r = start(7, "Debt characterization vs rank decodability");
    Checks c;
    Agreement a16, a24;
    for (int m = 0; m < 2; ++m) {
        const CodeParams p = code(3, 6, 5, 4, m == 0 ? Mode::Nonsystematic : Mode::SystematicPec);
        const ChannelSpec ch = ChannelSpec::gilbert_elliott(0.02, 0.4, EmissionModel::packet(6, 0.8),
                                                            EmissionModel::packet(6, 0.0));
        for (int i = 0; i < 4; ++i) {
            const std::uint64_t seed = derive_seed(kSeed, 70 + 10 * m + i);
            const Trace tr = sample_trace(ch, 10000, seed);
            const Agreement x = debt_vs_codec(p, tr, 16, seed);
            const Agreement y = debt_vs_codec(p, tr, 24, seed);
            a16.compared += x.compared;
            a16.disagree += x.disagree;
            a24.compared += y.compared;
            a24.disagree += y.disagree;
        }
    }
    const double agree16 = 1.0 - static_cast<double>(a16.disagree) / static_cast<double>(a16.compared);
    c.add(agree16 >= kAgreementQ16, fmt::format("q=16: {} of {} slots agree ({:.5f} >= {})",
                                                a16.compared - a16.disagree, a16.compared, agree16, kAgreementQ16));
    c.add(a24.disagree == 0, fmt::format("q=24: {} disagreements over {} slots", a24.disagree, a24.compared));
    r.pass = c.all;
    r.summary = fmt::format("q=16 agreement {:.5f} (tol {}), q=24 disagreements {} of {}", agree16, kAgreementQ16,
                            a24.disagree, a24.compared);
    r.details = c.lines;
    return r;
}

CriterionResult baseline_crossover(const VerifyOptions& o) {
    CriterionResult r = start(8, "Deterministic baseline vs random codes across loss_G");
    Checks c;
    // Loss rates below the rate-1/2 capacity limit 1 - K/N. At 0.5 no code of
    // this rate is reliable and the comparison flips back (see the ledger).
    const std::vector<double> grid = {0.01, 0.05, 0.1, 0.2, 0.3, 0.4};
    const CodeParams p = code(3, 6, 5, 4, Mode::SystematicPec);
    const std::vector<Engine> engines = {Engine::parse("baseline:k3n6"), Engine::parse("debt:systematic"),
                                         Engine::parse("debt:nonsystematic")};
    const auto rows = sweep([&](double v) { return Scenario{fig5_channel(v), p}; }, "loss_G", grid, engines,
                            SimOptions{1000000, 10, derive_seed(kSeed, 8), o.threads});
    std::vector<double> diff;
    const PeEstimate* last_sys = nullptr;
    const PeEstimate* last_ns = nullptr;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const PeEstimate& b = rows[3 * i].estimate;
        const PeEstimate& s = rows[3 * i + 1].estimate;
        const PeEstimate& n = rows[3 * i + 2].estimate;
        diff.push_back(b.pe_hat - s.pe_hat);
        last_sys = &s;
        last_ns = &n;
        c.lines.push_back(fmt::format("     loss_G={:.2f}: baseline={:.4e} srlsc={:.4e} nrlsc={:.4e}", grid[i],
                                      b.pe_hat, s.pe_hat, n.pe_hat));
    }
    c.add(diff.front() < 0.0, fmt::format("baseline lower at loss_G={}: diff {:.3e}", grid.front(), diff.front()));
    c.add(diff.back() > 0.0, fmt::format("baseline higher at loss_G={}: diff {:.3e}", grid.back(), diff.back()));
    c.add(last_sys->ci_high < last_ns->ci_low,
          fmt::format("srlsc below nrlsc at loss_G={}: [{:.4e},{:.4e}] vs [{:.4e},{:.4e}]", grid.back(),
                      last_sys->ci_low, last_sys->ci_high, last_ns->ci_low, last_ns->ci_high));
    r.pass = c.all;
    r.summary = fmt::format("diff(baseline - srlsc) {:.3e} at {} -> {:.3e} at {}; srlsc {:.4e} vs nrlsc {:.4e}",
                            diff.front(), grid.front(), diff.back(), grid.back(), last_sys->pe_hat, last_ns->pe_hat);
    r.details = c.lines;
    return r;
}

bool rows_stochastic(const Eigen::MatrixXd& m) {
    return (m.rowwise().sum().array() - 1.0).abs().maxCoeff() <= kStochasticTol && m.minCoeff() >= 0.0;
}

// Returns an empty string when every invariant holds, else the first violation.
std::string debt_invariants(const Trace& tr, const CodeParams& p) {
    const DebtTrajectory traj = run_trajectory(tr, p);
    const bool sys = p.mode == Mode::SystematicPec;
    const std::int64_t cap = p.infinite_memory() ? std::numeric_limits<std::int64_t>::max()
                                                 : static_cast<std::int64_t>(p.zeta());
    std::size_t z = 0, h = 0;
    std::int64_t prev_zero = 0;
    for (std::int64_t t = 1; t <= traj.length(); ++t) {
        const int d = traj.debt[t], ceil = traj.ceiling[t];
        if (d < 0 || d > ceil) return fmt::format("slot {}: debt {} outside [0, {}]", t, d, ceil);
        if (ceil < 1 || ceil > cap) return fmt::format("slot {}: ceiling {} outside [1, {}]", t, ceil, cap);
        const bool zero = z < traj.zero_hits.size() && traj.zero_hits[z] == t;
        if ((d == 0) != zero) return fmt::format("slot {}: zero-hit list disagrees with debt {}", t, d);
        if (zero) {
            if (traj.zero_hits[z] <= prev_zero && z > 0) return "zero hits not increasing";
            prev_zero = t;
            ++z;
        }
        const bool hit = h < traj.ceiling_hits.size() && traj.ceiling_hits[h] == t;
        if (hit) {
            if (d != ceil) return fmt::format("slot {}: ceiling hit with debt {} != {}", t, d, ceil);
            ++h;
        }
        if (sys && d > 0 && !p.infinite_memory()) {
            std::int64_t count = 0;
            for (std::int64_t u = std::max(t - *p.alpha, traj.last_zero[t]) + 1; u <= t; ++u) count += traj.erasure[u];
            if (ceil - 1 != p.K * count)
                return fmt::format("slot {}: ceiling {} != 1 + K * window erasures {}", t, ceil, count);
        }
    }
    if (h != traj.ceiling_hits.size()) return "ceiling hits at zero-debt slots";
    return {};
}

bool is_subset(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

CriterionResult property_suite(const VerifyOptions&) {
    CriterionResult r = start(9, "Bounds, monotonicity and chain invariants");
    Checks c;

    // Analytic p_e over delta, for the small grid and the full-size chain.
    bool bounds = true, mono = true, stoch = true;
    double worst_residual = 0.0;
    auto check_chain = [&](const CodeParams& base, const ChannelSpec& ch) {
        const DebtChain chain = DebtChain::build(base, ch);
        for (int s = 0; s < chain.L(); ++s) stoch = stoch && rows_stochastic(chain.gamma(s));
        stoch = stoch && rows_stochastic(chain.T(chain.zeta()));
        const Eigen::VectorXd pi0 = stationary_initial(chain);
        const Eigen::MatrixXd T00 = renewal_transition_matrices(chain).T00;
        worst_residual = std::max(worst_residual, (pi0.transpose() * T00 - pi0.transpose()).cwiseAbs().maxCoeff());
        worst_residual = std::max(worst_residual, std::abs(pi0.sum() - 1.0));
        double prev = 2.0;
        for (int delta = 0; delta <= 2 * (*base.alpha + 1); ++delta) {
            const double pe = pe_nrlsc(chain, pi0, delta, *base.alpha);
            bounds = bounds && pe >= 0.0 && pe <= 1.0;
            mono = mono && pe <= prev + kMonotoneSlack;
            prev = pe;
        }
    };
    for (int L : {1, 2})
        for (int alpha : {1, 2})
            for (double e : {0.1, 0.3, 0.45}) check_chain(code(1, 2, alpha, 0, Mode::Nonsystematic), small_channel(e, L));
    check_chain(code(5, 10, 4, 0, Mode::Nonsystematic), section5_channel());
    for (double p : {0.6, 0.7, 0.8, 0.9}) {
        double prev = 2.0;
        for (int delta = 0; delta <= 12; ++delta) {
            const double pe = pe_srlsc_infinite(p, delta).pe;
            bounds = bounds && pe >= 0.0 && pe <= 1.0 - p + kMonotoneSlack;
            mono = mono && pe <= prev + kMonotoneSlack;
            prev = pe;
        }
    }
    c.add(bounds, "analytic p_e within [0, 1] (systematic: within [0, 1-p])");
    c.add(mono, "analytic p_e non-increasing in delta");
    c.add(stoch, "debt transition matrices and T_n row-stochastic");
    c.add(worst_residual <= kRestartResidualTol,
          fmt::format("restart distribution fixed-point residual {:.2e} <= {}", worst_residual, kRestartResidualTol));

    // Fuzz traces of 1e6 slots.
    std::string violation;
    const Trace symbol_tr = sample_trace(section5_channel(), 1000000, derive_seed(kSeed, 91));
    const Trace packet_tr = sample_trace(fig5_channel(0.2), 1000000, derive_seed(kSeed, 92));
    const Trace iid_tr = sample_trace(ChannelSpec::iid(EmissionModel::packet(6, 0.7)), 1000000, derive_seed(kSeed, 93));
    const std::vector<std::pair<CodeParams, const Trace*>> fuzz = {
        {code(5, 10, 4, 5, Mode::Nonsystematic), &symbol_tr},
        {code(3, 6, 5, 4, Mode::Nonsystematic), &packet_tr},
        {code(3, 6, 5, 4, Mode::SystematicPec), &packet_tr},
        {code(3, 6, std::nullopt, 4, Mode::SystematicPec), &iid_tr},
    };
    for (const auto& [p, tr] : fuzz)
        if (violation.empty()) violation = debt_invariants(*tr, p);
    c.add(violation.empty(), "debt bounds on 1e6-slot fuzz traces" + (violation.empty() ? "" : ": " + violation));

    // Error sets shrink as the delay grows, for a fixed trace.
    bool nested = true;
    double sim_worst = 0.0;
    for (const auto& [p0, tr] : fuzz) {
        std::vector<std::int64_t> prev;
        for (int delta = 0; delta <= 12; ++delta) {
            CodeParams p = p0;
            p.delta = delta;
            const DebtTrajectory traj = run_trajectory(*tr, p);
            std::vector<std::int64_t> err;
            if (p.mode == Mode::Nonsystematic) err = error_slots_nrlsc(traj, p);
            else if (p.infinite_memory()) err = error_slots_srlsc_infinite(traj, *tr, p);
            else err = error_slots_srlsc(traj, *tr, p);
            if (delta > 0) nested = nested && is_subset(err, prev);
            const double frac = static_cast<double>(err.size()) / static_cast<double>(tr->length());
            sim_worst = std::max(sim_worst, frac);
            prev = std::move(err);
        }
    }
    c.add(nested, "debt error sets nested (non-increasing) in delta on fuzz traces");
    c.add(sim_worst >= 0.0 && sim_worst <= 1.0,
          fmt::format("empirical error fractions within [0, 1] (max {:.4f})", sim_worst));

    r.pass = c.all;
    r.summary = fmt::format("bounds {} monotone {} stochastic {} residual {:.1e} fuzz {} nested {}",
                            bounds ? "ok" : "FAIL", mono ? "ok" : "FAIL", stoch ? "ok" : "FAIL", worst_residual,
                            violation.empty() ? "ok" : "FAIL", nested ? "ok" : "FAIL");
    r.details = c.lines;
    return r;
}

} // namespace

std::vector<CriterionResult> run_acceptance(const VerifyOptions& opts,
                                            const std::function<void(const CriterionResult&)>& on_result) {
    using Fn = CriterionResult (*)(const VerifyOptions&);
    const Fn all[] = {nrlsc_vs_simulation, srlsc_vs_simulation, oracle_equivalence,
                      degeneracy,          catalan_suite,       example_one,
                      debt_rank_equivalence, baseline_crossover, property_suite};
    std::vector<CriterionResult> out;
    for (int id = 1; id <= 9; ++id) {
        if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), id) == opts.only.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        CriterionResult r;
        try {
            r = all[id - 1](opts);
        } catch (const std::exception& e) {
            r.id = id;
            r.title = "criterion raised an exception";
            r.pass = false;
            r.summary = e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (on_result) on_result(r);
        out.push_back(std::move(r));
    }
    return out;
}

std::string format_result_line(const CriterionResult& r) {
    return fmt::format("criterion {} {}: {} | {} [{:.1f}s]", r.id, r.pass ? "PASS" : "FAIL", r.title, r.summary,
                       r.seconds);
}

} // namespace rlsc
