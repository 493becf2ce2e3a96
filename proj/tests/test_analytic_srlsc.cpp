#include <doctest.h>

#include <cmath>

#include "rlsc/analytic_srlsc.hpp"
#include "rlsc/channels.hpp"
#include "rlsc/debt.hpp"
#include "rlsc/errors.hpp"

using namespace rlsc;

namespace {

// Error fraction of the infinite-memory systematic code from the debt tracker.
double simulate(int K, double p, int delta, std::int64_t T, std::uint64_t seed) {
    CodeParams c;
    c.K = K;
    c.N = 2 * K;
    c.alpha.reset();
    c.delta = delta;
    c.mode = Mode::SystematicPec;
    TraceSampler s(ChannelSpec::iid(EmissionModel::packet(2 * K, p)), seed);
    DebtTracker tr(c);
    std::int64_t slots = 0, errors = 0, cycles = 0;
    for (std::int64_t t = 1; t <= T; ++t)
        if (tr.push(s.next())) {
            if (cycles++ == 0) continue;
            slots += tr.cycle().end - tr.cycle().start;
            errors += tr.errors();
        }
    return static_cast<double>(errors) / static_cast<double>(slots);
}

} // namespace

TEST_CASE("catalan numbers") {
    CHECK(catalan(0) == 1);
    CHECK(catalan(4) == 14);
    CHECK(catalan(9) == 4862);
    CHECK(catalan(35) == 3116285494907301262ULL);
    CHECK(log_catalan(9) == doctest::Approx(std::log(4862.0)).epsilon(1e-12));
    CHECK(log_catalan(30) == doctest::Approx(std::log(static_cast<double>(catalan(30)))).epsilon(1e-12));
    CHECK_THROWS_AS(catalan(36), ContractError);
}

TEST_CASE("up-step counts: recursion against lattice-path enumeration") {
    for (int l = 1; l <= 12; ++l) {
        const auto rec = nup_recursion(l);
        for (int j = 1; j <= 2 * l; ++j) {
            CAPTURE(l);
            CAPTURE(j);
            CHECK(rec[j] == nup_oracle(l, j));
        }
    }
    // Every valid path steps up first and down last.
    CHECK(nup_oracle(5, 1) == catalan(4));
    CHECK(nup_oracle(5, 10) == 0);
}

TEST_CASE("up-step prefix sums: both closed forms") {
    CHECK(nup_sum(5, 3) == 60);
    for (int l = 1; l <= 12; ++l)
        for (int delta = 0; 2 * l >= delta + 2; ++delta) {
            std::int64_t prefix = 0;
            for (int j = 1; j <= 2 * l - delta - 1; ++j) prefix += nup_oracle(l, j);
            CAPTURE(l);
            CAPTURE(delta);
            CHECK(nup_sum(l, delta) == prefix);
            CHECK(nup_sum_piecewise(l, delta) == prefix);
        }
}

TEST_CASE("mean cycle length matches the random-walk formula") {
    // A cycle is one delivered slot, or an up step followed by a +-1 walk with
    // drift 1 - 2p back to zero: E = p + (1 - p)(1 + 1/(2p - 1)) = p / (2p - 1).
    for (double p : {0.55, 0.6, 0.7, 0.8, 0.9, 0.99}) {
        CAPTURE(p);
        CHECK(expected_interval_integral(p) == doctest::Approx(p / (2 * p - 1)).epsilon(1e-9));
    }
    CHECK(expected_interval_integral(1.0) == doctest::Approx(1.0));
}

TEST_CASE("truncated spectral sum converges to the integral") {
    for (double p : {0.6, 0.7, 0.9}) {
        const double exact = expected_interval_integral(p);
        CHECK(std::abs(expected_interval_truncated(p, 100000) - exact) / exact <= 1e-4);
        CHECK(std::abs(expected_interval_truncated(p, 200) - exact) <=
              std::abs(expected_interval_truncated(p, 20) - exact) + 1e-15);
    }
}

TEST_CASE("zero delay loses every erased slot") {
    for (double p : {0.6, 0.7, 0.8, 0.9}) CHECK(pe_srlsc_infinite(p, 0).pe == doctest::Approx(1 - p).epsilon(1e-8));
}

TEST_CASE("series is non-increasing in the delay and converges") {
    double prev = 1.0;
    for (int delta = 0; delta <= 20; ++delta) {
        const auto r = pe_srlsc_infinite(0.7, delta);
        CHECK(r.converged);
        CHECK(r.pe <= prev + 1e-15);
        prev = r.pe;
    }
}

TEST_CASE("series agrees with simulation for K = 1 and K = 5") {
    for (int K : {1, 5}) {
        const double pe = pe_srlsc_infinite(0.7, 3).pe;
        const double sim = simulate(K, 0.7, 3, 3000000, 41 + K);
        CAPTURE(K);
        CHECK(std::abs(sim - pe) / pe <= 0.03);
    }
}

TEST_CASE("loss rates at or above one half are rejected") {
    CHECK_THROWS_AS(pe_srlsc_infinite(0.5, 3), ContractError);
    CHECK_THROWS_AS(expected_interval_integral(0.3), ContractError);
    CHECK(pe_srlsc_infinite(1.0, 3).pe == 0.0);
}
