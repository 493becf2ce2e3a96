#include "rlsc/channels.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "rlsc/errors.hpp"
#include "rlsc/rng.hpp"

namespace rlsc {

namespace {

constexpr double kMassTol = 1e-12;

void check_probability(double x, const char* what) {
    if (!(x >= 0.0 && x <= 1.0)) throw ContractError(std::string(what) + " must lie in [0, 1]");
}

std::vector<double> cumulative(const std::vector<double>& p) {
    std::vector<double> c(p.size());
    std::partial_sum(p.begin(), p.end(), c.begin());
    c.back() = 1.0;
    return c;
}

int inverse_cdf(const std::vector<double>& cdf, double u) {
    int i = 0;
    const int last = static_cast<int>(cdf.size()) - 1;
    while (i < last && u >= cdf[i]) ++i;
    return i;
}

// True iff the chain has exactly one closed communicating class.
bool single_recurrent_class(const Eigen::MatrixXd& T) {
    const int L = static_cast<int>(T.rows());
    std::vector<std::vector<char>> reach(L, std::vector<char>(L, 0));
    for (int i = 0; i < L; ++i) {
        reach[i][i] = 1;
        for (int j = 0; j < L; ++j)
            if (T(i, j) > 0.0) reach[i][j] = 1;
    }
    for (int k = 0; k < L; ++k)
        for (int i = 0; i < L; ++i)
            if (reach[i][k])
                for (int j = 0; j < L; ++j)
                    if (reach[k][j]) reach[i][j] = 1;
    int closed = 0;
    std::vector<char> seen(L, 0);
    for (int i = 0; i < L; ++i) {
        if (seen[i]) continue;
        bool is_closed = true;
        for (int j = 0; j < L; ++j) {
            if (reach[i][j] && reach[j][i]) seen[j] = 1;
            if (reach[i][j] && !reach[j][i]) is_closed = false;
        }
        if (is_closed) ++closed;
    }
    return closed == 1;
}

} // namespace

EmissionModel EmissionModel::binomial(int N, double success) {
    require(N >= 1, "binomial emission: N must be positive");
    check_probability(success, "binomial success probability");
    EmissionModel e;
    e.N = N;
    e.pmf.resize(N + 1);
    for (int k = 0; k <= N; ++k) {
        const double logc = std::lgamma(N + 1.0) - std::lgamma(k + 1.0) - std::lgamma(N - k + 1.0);
        const double a = k == 0 ? 1.0 : std::pow(success, k);
        const double b = k == N ? 1.0 : std::pow(1.0 - success, N - k);
        e.pmf[k] = std::exp(logc) * a * b;
    }
    const double s = std::accumulate(e.pmf.begin(), e.pmf.end(), 0.0);
    for (double& x : e.pmf) x /= s;
    return e;
}

EmissionModel EmissionModel::packet(int N, double delivery) {
    require(N >= 1, "packet emission: N must be positive");
    check_probability(delivery, "packet delivery probability");
    EmissionModel e;
    e.N = N;
    e.pmf.assign(N + 1, 0.0);
    e.pmf[N] = delivery;
    e.pmf[0] += 1.0 - delivery;
    return e;
}

EmissionModel EmissionModel::table(std::vector<double> pmf) {
    require(pmf.size() >= 2, "table emission: need at least two entries (N >= 1)");
    double s = 0.0;
    for (double x : pmf) {
        check_probability(x, "table emission entry");
        s += x;
    }
    require(std::abs(s - 1.0) <= kMassTol, "table emission: entries must sum to 1");
    EmissionModel e;
    e.N = static_cast<int>(pmf.size()) - 1;
    e.pmf = std::move(pmf);
    return e;
}

bool EmissionModel::is_packet() const {
    for (int k = 1; k < N; ++k)
        if (pmf[k] != 0.0) return false;
    return true;
}

ChannelSpec::ChannelSpec(Eigen::MatrixXd transition, std::vector<EmissionModel> per_state, bool packet)
    : L(static_cast<int>(transition.rows())), T1(std::move(transition)), emissions(std::move(per_state)),
      packet_mode(packet) {
    require(L >= 1 && T1.cols() == L, "channel: transition matrix must be square and non-empty");
    require(static_cast<int>(emissions.size()) == L, "channel: need one emission model per state");
    for (int i = 0; i < L; ++i) {
        for (int j = 0; j < L; ++j) check_probability(T1(i, j), "transition entry");
        require(std::abs(T1.row(i).sum() - 1.0) <= kMassTol, "channel: transition rows must sum to 1");
    }
    for (const auto& e : emissions) {
        require(e.N == emissions.front().N, "channel: all states must share N");
        require(std::abs(std::accumulate(e.pmf.begin(), e.pmf.end(), 0.0) - 1.0) <= kMassTol,
                "channel: emission pmf must sum to 1");
        if (packet_mode) require(e.is_packet(), "channel: packet mode requires C_t in {0, N}");
    }
    require(single_recurrent_class(T1), "channel: state chain must have a single recurrent class");
}

ChannelSpec ChannelSpec::iid(EmissionModel e) {
    const bool packet = e.is_packet();
    return ChannelSpec(Eigen::MatrixXd::Ones(1, 1), {std::move(e)}, packet);
}

ChannelSpec ChannelSpec::gilbert_elliott(double p, double r, EmissionModel good, EmissionModel bad) {
    check_probability(p, "p");
    check_probability(r, "r");
    Eigen::MatrixXd T(2, 2);
    T << 1.0 - p, p, r, 1.0 - r;
    const bool packet = good.is_packet() && bad.is_packet();
    return ChannelSpec(T, {std::move(good), std::move(bad)}, packet);
}

Eigen::VectorXd stationary_distribution(const ChannelSpec& spec) {
    const int L = spec.L;
    Eigen::MatrixXd A(L + 1, L);
    A.topRows(L) = spec.T1.transpose() - Eigen::MatrixXd::Identity(L, L);
    A.row(L).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(L + 1);
    b(L) = 1.0;
    Eigen::VectorXd pi = A.colPivHouseholderQr().solve(b);
    for (int i = 0; i < L; ++i) pi(i) = std::max(pi(i), 0.0);
    return pi / pi.sum();
}

TraceSampler::TraceSampler(const ChannelSpec& spec, std::uint64_t seed) : seed_(seed) {
    for (const auto& e : spec.emissions) emission_cdf_.push_back(cumulative(e.pmf));
    for (int i = 0; i < spec.L; ++i) {
        std::vector<double> row(spec.L);
        for (int j = 0; j < spec.L; ++j) row[j] = spec.T1(i, j);
        transition_cdf_.push_back(cumulative(row));
    }
    const Eigen::VectorXd pi = stationary_distribution(spec);
    initial_cdf_ = cumulative(std::vector<double>(pi.data(), pi.data() + pi.size()));
}

int TraceSampler::next() {
    ++t_;
    const auto t = static_cast<std::uint64_t>(t_);
    if (t_ == 1)
        state_ = inverse_cdf(initial_cdf_, unit_real(stream_word(seed_, 0, 0)));
    else
        state_ = inverse_cdf(transition_cdf_[state_], unit_real(stream_word(seed_, t, 0)));
    return inverse_cdf(emission_cdf_[state_], unit_real(stream_word(seed_, t, 1)));
}

Trace sample_trace(const ChannelSpec& spec, std::int64_t T, std::uint64_t seed) {
    require(T >= 1, "sample_trace: T must be positive");
    Trace tr;
    tr.N = spec.N();
    tr.packet_mode = spec.packet_mode;
    tr.state.resize(T + 1, 0);
    tr.received.resize(T + 1, static_cast<std::uint16_t>(tr.N));
    TraceSampler s(spec, seed);
    for (std::int64_t t = 1; t <= T; ++t) {
        tr.received[t] = static_cast<std::uint16_t>(s.next());
        tr.state[t] = static_cast<std::uint8_t>(s.state());
    }
    return tr;
}

Trace trace_from_erasures(int N, std::int64_t T, const std::vector<std::int64_t>& erased_slots) {
    Trace tr;
    tr.N = N;
    tr.packet_mode = true;
    tr.state.assign(T + 1, 0);
    tr.received.assign(T + 1, static_cast<std::uint16_t>(N));
    for (auto t : erased_slots) {
        require(t >= 1 && t <= T, "trace_from_erasures: slot out of range");
        tr.received[t] = 0;
    }
    return tr;
}

} // namespace rlsc
