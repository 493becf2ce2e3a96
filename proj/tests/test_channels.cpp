#include <doctest.h>

#include <cmath>
#include <numeric>

#include "rlsc/channels.hpp"
#include "rlsc/errors.hpp"

using namespace rlsc;

TEST_CASE("binomial emission") {
    const EmissionModel e = EmissionModel::binomial(10, 0.7);
    CHECK(e.N == 10);
    REQUIRE(e.pmf.size() == 11);
    CHECK(std::accumulate(e.pmf.begin(), e.pmf.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::max_element(e.pmf.begin(), e.pmf.end()) - e.pmf.begin() == 7);
    CHECK(e.pmf[10] == doctest::Approx(std::pow(0.7, 10)));
    CHECK_FALSE(e.is_packet());
}

TEST_CASE("packet and table emissions") {
    const EmissionModel p = EmissionModel::packet(10, 0.7);
    CHECK(p.pmf[10] == doctest::Approx(0.7));
    CHECK(p.pmf[0] == doctest::Approx(0.3));
    CHECK(p.is_packet());
    CHECK(p.erasure_probability() == doctest::Approx(0.3));

    const EmissionModel t = EmissionModel::table({0.3, 0.7});
    CHECK(t.N == 1);
    CHECK(t.pmf == std::vector<double>{0.3, 0.7});

    CHECK_THROWS_AS(EmissionModel::binomial(10, 1.5), ContractError);
    CHECK_THROWS_AS(EmissionModel::packet(10, -0.1), ContractError);
    CHECK_THROWS_AS(EmissionModel::table({0.3, 0.6}), ContractError);
}

TEST_CASE("stationary distributions") {
    const auto one = ChannelSpec::iid(EmissionModel::packet(2, 0.5));
    CHECK(stationary_distribution(one)(0) == doctest::Approx(1.0));

    const auto ge = ChannelSpec::gilbert_elliott(1e-4, 0.5, EmissionModel::binomial(10, 0.7),
                                                 EmissionModel::binomial(10, 0.0));
    const Eigen::VectorXd pi = stationary_distribution(ge);
    CHECK(pi(0) == doctest::Approx(0.5 / 0.5001).epsilon(1e-12));
    CHECK(pi(1) == doctest::Approx(0.0001 / 0.5001).epsilon(1e-12));

    Eigen::MatrixXd T(3, 3);
    T << 0.2, 0.5, 0.3, 0.3, 0.2, 0.5, 0.5, 0.3, 0.2;
    const EmissionModel e = EmissionModel::packet(2, 0.9);
    const ChannelSpec three(T, {e, e, e}, true);
    const Eigen::VectorXd u = stationary_distribution(three);
    for (int i = 0; i < 3; ++i) CHECK(u(i) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("channel validation") {
    const EmissionModel e = EmissionModel::packet(2, 0.9);
    Eigen::MatrixXd bad_rows(2, 2);
    bad_rows << 0.5, 0.4, 0.5, 0.5;
    CHECK_THROWS_AS(ChannelSpec(bad_rows, {e, e}, true), ContractError);

    Eigen::MatrixXd two_classes = Eigen::MatrixXd::Identity(2, 2);
    CHECK_THROWS_AS(ChannelSpec(two_classes, {e, e}, true), ContractError);

    // Packet mode needs all-or-nothing emissions.
    CHECK_THROWS_AS(ChannelSpec(Eigen::MatrixXd::Ones(1, 1), {EmissionModel::binomial(2, 0.5)}, true),
                    ContractError);
    CHECK_THROWS_AS(ChannelSpec(Eigen::MatrixXd::Ones(1, 1), {EmissionModel::packet(2, 0.5), e}, true),
                    ContractError);
}

TEST_CASE("traces are deterministic and respect packet mode") {
    const auto ge = ChannelSpec::gilbert_elliott(0.05, 0.3, EmissionModel::packet(6, 0.9),
                                                 EmissionModel::packet(6, 0.0));
    const Trace a = sample_trace(ge, 5000, 11);
    const Trace b = sample_trace(ge, 5000, 11);
    const Trace c = sample_trace(ge, 5000, 12);
    CHECK(a.received == b.received);
    CHECK(a.state == b.state);
    CHECK(a.received != c.received);
    CHECK(a.length() == 5000);
    for (std::int64_t t = 1; t <= a.length(); ++t) REQUIRE((a.received[t] == 0 || a.received[t] == 6));
}

TEST_CASE("sampler matches the batch trace slot by slot") {
    const auto ge = ChannelSpec::gilbert_elliott(0.1, 0.4, EmissionModel::binomial(4, 0.8),
                                                 EmissionModel::binomial(4, 0.2));
    const Trace tr = sample_trace(ge, 1000, 99);
    TraceSampler s(ge, 99);
    for (std::int64_t t = 1; t <= 1000; ++t) {
        REQUIRE(s.next() == tr.received[t]);
        REQUIRE(s.state() == tr.state[t]);
    }
}

TEST_CASE("full delivery has no erasures") {
    const auto full = ChannelSpec::iid(EmissionModel::binomial(5, 1.0));
    const Trace tr = sample_trace(full, 1000, 1);
    for (std::int64_t t = 1; t <= 1000; ++t) REQUIRE_FALSE(tr.erased(t));
}

TEST_CASE("state occupancy matches the stationary distribution") {
    const auto ge = ChannelSpec::gilbert_elliott(0.5, 0.5, EmissionModel::packet(2, 0.9),
                                                 EmissionModel::packet(2, 0.1));
    const std::int64_t T = 1000000;
    const Trace tr = sample_trace(ge, T, 2024);
    double good = 0;
    for (std::int64_t t = 1; t <= T; ++t) good += tr.state[t] == 0;
    const double sigma = 0.5 / std::sqrt(static_cast<double>(T));
    CHECK(std::abs(good / T - 0.5) <= 3 * sigma);
}

TEST_CASE("empirical erasure rate of a binomial state") {
    const auto ch = ChannelSpec::iid(EmissionModel::binomial(3, 0.9));
    const std::int64_t T = 200000;
    const Trace tr = sample_trace(ch, T, 5);
    double erased = 0;
    for (std::int64_t t = 1; t <= T; ++t) erased += tr.erased(t);
    const double pe = 1 - std::pow(0.9, 3);
    CHECK(std::abs(erased / T - pe) <= 4 * std::sqrt(pe * (1 - pe) / T));
}

TEST_CASE("trace from an erasure list") {
    const Trace tr = trace_from_erasures(2, 8, {1, 2, 3, 6});
    CHECK(tr.packet_mode);
    CHECK(tr.erased(1));
    CHECK(tr.erased(6));
    CHECK_FALSE(tr.erased(4));
    CHECK(tr.received[4] == 2);
    CHECK_THROWS_AS(trace_from_erasures(2, 8, {9}), ContractError);
}
