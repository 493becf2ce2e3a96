#include <doctest.h>

#include <cmath>

#include "rlsc/analytic_nrlsc.hpp"
#include "rlsc/channels.hpp"
#include "rlsc/debt.hpp"

using namespace rlsc;

namespace {

CodeParams code(int K, int N, int alpha, int delta) {
    CodeParams p;
    p.K = K;
    p.N = N;
    p.alpha = alpha;
    p.delta = delta;
    return p;
}

// Long-run error fraction from the streaming debt tracker.
double simulate(const ChannelSpec& ch, const CodeParams& p, std::int64_t T, std::uint64_t seed) {
    TraceSampler s(ch, seed);
    DebtTracker tr(p);
    std::int64_t slots = 0, errors = 0, cycles = 0;
    for (std::int64_t t = 1; t <= T; ++t)
        if (tr.push(s.next())) {
            if (cycles++ == 0) continue;  // burn-in cycle
            slots += tr.cycle().end - tr.cycle().start;
            errors += tr.errors();
        }
    return static_cast<double>(errors) / static_cast<double>(slots);
}

} // namespace

TEST_CASE("matrix power") {
    Eigen::MatrixXd A(2, 2);
    A << 1, 1, 0, 1;
    CHECK(matrix_power(A, 0).isIdentity());
    CHECK(matrix_power(A, 5)(0, 1) == 5.0);
    CHECK(matrix_power(A, 1).isApprox(A));
}

TEST_CASE("closed form agrees with path enumeration") {
    const auto ch = ChannelSpec::gilbert_elliott(0.1, 0.3, EmissionModel::binomial(3, 0.8),
                                                 EmissionModel::binomial(3, 0.3));
    for (int alpha : {1, 2, 3}) {
        const DebtChain c = DebtChain::build(code(1, 3, alpha, 0), ch);
        const Eigen::VectorXd pi0 = stationary_initial(c);
        for (int delta = 0; delta <= 2 * (alpha + 1); ++delta) {
            const double closed = pe_nrlsc(c, pi0, delta, alpha);
            const double oracle = pe_oracle_small(c, pi0, delta, alpha);
            CAPTURE(alpha);
            CAPTURE(delta);
            CHECK(closed == doctest::Approx(oracle).epsilon(1e-8));
        }
    }
}

TEST_CASE("mean interval agrees with the enumerated cycle statistics") {
    const auto ch = ChannelSpec::iid(EmissionModel::binomial(2, 0.65));
    const DebtChain c = DebtChain::build(code(1, 2, 2, 1), ch);
    const Eigen::VectorXd pi0 = stationary_initial(c);
    const AnalyticTerms t = nrlsc_terms(c, pi0, 1, 2);
    const OracleStats o = oracle_cycle_statistics(c, pi0, 1, 2);
    CHECK(o.mass == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(t.E_interval == doctest::Approx(o.E_interval).epsilon(1e-8));
    CHECK(t.E_LG == doctest::Approx(o.E_LG).epsilon(1e-8));
    CHECK(t.E_LB1 == doctest::Approx(o.E_LB1).epsilon(1e-8));
    CHECK(t.E_LB2 == doctest::Approx(o.E_LB2).epsilon(1e-8));
}

TEST_CASE("closed form agrees with simulation") {
    const auto ch = ChannelSpec::gilbert_elliott(0.05, 0.4, EmissionModel::binomial(4, 0.8),
                                                 EmissionModel::binomial(4, 0.2));
    const CodeParams p = code(2, 4, 2, 2);
    const DebtChain c = DebtChain::build(p, ch);
    const double pe = pe_nrlsc(c, stationary_initial(c), p.delta, *p.alpha);
    const double sim = simulate(ch, p, 3000000, 77);
    CHECK(pe > 0.0);
    CHECK(std::abs(sim - pe) / pe <= 0.03);
}

TEST_CASE("error probability is bounded and non-increasing in the delay") {
    const auto ch = ChannelSpec::gilbert_elliott(0.02, 0.4, EmissionModel::binomial(6, 0.8),
                                                 EmissionModel::binomial(6, 0.1));
    const DebtChain c = DebtChain::build(code(3, 6, 3, 0), ch);
    const Eigen::VectorXd pi0 = stationary_initial(c);
    double prev = 1.0;
    for (int delta = 0; delta <= 12; ++delta) {
        const double pe = pe_nrlsc(c, pi0, delta, 3);
        CHECK(pe >= 0.0);
        CHECK(pe <= prev + 1e-12);
        prev = pe;
    }
}

TEST_CASE("perfect channel never errs") {
    const DebtChain c = DebtChain::build(code(2, 4, 2, 0), ChannelSpec::iid(EmissionModel::binomial(4, 1.0)));
    const Eigen::VectorXd pi0 = stationary_initial(c);
    const AnalyticTerms t = nrlsc_terms(c, pi0, 0, 2);
    CHECK(t.E_interval == doctest::Approx(1.0));
    CHECK(t.pe == 0.0);
}
