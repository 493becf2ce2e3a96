#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace rlsc {

// Distribution of the received-symbol count C_t in {0..N} for one hidden state.
struct EmissionModel {
    int N = 0;
    std::vector<double> pmf;

    static EmissionModel binomial(int N, double success);
    // C_t = N with probability delivery, 0 otherwise.
    static EmissionModel packet(int N, double delivery);
    static EmissionModel table(std::vector<double> pmf);

    bool is_packet() const;
    double erasure_probability() const { return 1.0 - pmf.back(); }
};

struct ChannelSpec {
    int L = 1;
    Eigen::MatrixXd T1;
    std::vector<EmissionModel> emissions;
    bool packet_mode = false;

    // Validates stochasticity, emission support and ergodicity.
    ChannelSpec(Eigen::MatrixXd transition, std::vector<EmissionModel> per_state, bool packet);

    static ChannelSpec iid(EmissionModel e);
    // Two states, good = 0, bad = 1; p = Pr(G->B), r = Pr(B->G).
    static ChannelSpec gilbert_elliott(double p, double r, EmissionModel good, EmissionModel bad);

    int N() const { return emissions.front().N; }
};

// Left fixed point of T1 with unit mass.
Eigen::VectorXd stationary_distribution(const ChannelSpec& spec);

// Slot t occupies index t; index 0 is the origin before transmission
// starts (state 0, nothing erased).
struct Trace {
    int N = 0;
    bool packet_mode = false;
    std::vector<std::uint8_t> state;
    std::vector<std::uint16_t> received;

    std::int64_t length() const { return static_cast<std::int64_t>(received.size()) - 1; }
    bool erased(std::int64_t t) const {
        return packet_mode ? received[t] == 0 : received[t] < N;
    }
};

// Slot-by-slot sampler. Slot t uses only the words stream_word(seed, t, .),
// so segments can be generated independently and still match the serial trace.
class TraceSampler {
public:
    TraceSampler(const ChannelSpec& spec, std::uint64_t seed);

    // Draws slot t = 1, 2, ... in order; returns C_t.
    int next();
    int state() const { return state_; }
    std::int64_t slot() const { return t_; }

private:
    std::uint64_t seed_;
    std::int64_t t_ = 0;
    int state_ = 0;
    std::vector<std::vector<double>> emission_cdf_;
    std::vector<std::vector<double>> transition_cdf_;
    std::vector<double> initial_cdf_;
};

Trace sample_trace(const ChannelSpec& spec, std::int64_t T, std::uint64_t seed);

// Packet-mode trace with erasures at the given slots.
Trace trace_from_erasures(int N, std::int64_t T, const std::vector<std::int64_t>& erased_slots);

} // namespace rlsc
