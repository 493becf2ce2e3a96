#include <doctest.h>

#include "rlsc/channels.hpp"
#include "rlsc/codec.hpp"
#include "rlsc/debt.hpp"
#include "rlsc/rng.hpp"

using namespace rlsc;

namespace {

CodeParams code(int K, int N, int alpha, int delta, Mode m) {
    CodeParams p;
    p.K = K;
    p.N = N;
    p.alpha = alpha;
    p.delta = delta;
    p.mode = m;
    return p;
}

// Slot u is decodable by its deadline iff every unit vector of its symbols
// lies in the row space of the cumulative receiver matrix at u + delay.
std::vector<std::int8_t> full_rank_oracle(const GeneratorSchedule& g, const Trace& tr, int delay) {
    const std::int64_t T = tr.length();
    const int K = g.params().K;
    std::vector<std::int8_t> out(static_cast<std::size_t>(T + 1), -1);
    for (std::int64_t u = 1; u + delay <= T; ++u) {
        const FieldMatrix H = receiver_matrix(g, tr, u + delay);
        bool ok = true;
        for (int k = 0; k < K && ok; ++k) {
            std::vector<Element> e(static_cast<std::size_t>(H.cols), 0);
            e[static_cast<std::size_t>((u - 1) * K + k)] = 1;
            ok = H.rows > 0 && row_space_contains(g.field(), H, e);
        }
        out[u] = ok ? 1 : 0;
    }
    return out;
}

std::vector<std::vector<Element>> random_sources(std::int64_t T, int K, int q, std::uint64_t seed) {
    std::vector<std::vector<Element>> s(static_cast<std::size_t>(T + 1));
    for (std::int64_t t = 1; t <= T; ++t)
        for (int k = 0; k < K; ++k)
            s[t].push_back(static_cast<Element>(stream_word(seed, t, k) & ((std::uint64_t{1} << q) - 1)));
    return s;
}

} // namespace

TEST_CASE("generator shape and systematic part") {
    const GeneratorSchedule g(code(2, 5, 3, 2, Mode::SystematicPec), 8, 1);
    CHECK(g.window_start(2) == 1);
    CHECK(g.window_start(10) == 7);
    const FieldMatrix G = g.make_generator(10);
    CHECK(G.rows == 5);
    CHECK(G.cols == 8);
    for (int i = 0; i < 2; ++i)
        for (int c = 0; c < 8; ++c) CHECK(G.at(i, c) == (c == 6 + i ? 1u : 0u));
    for (int i = 2; i < 5; ++i)
        for (int c = 0; c < 8; ++c) CHECK(G.at(i, c) != 0);
    CHECK(g.make_generator(1).cols == 2);
}

TEST_CASE("generator is a pure function of the seed") {
    const CodeParams p = code(2, 4, 2, 2, Mode::Nonsystematic);
    const GeneratorSchedule a(p, 16, 5), b(p, 16, 5), c(p, 16, 6);
    CHECK(a.make_generator(7).entries == b.make_generator(7).entries);
    CHECK(a.make_generator(7).entries != c.make_generator(7).entries);
}

TEST_CASE("small example decodability") {
    const Trace tr = trace_from_erasures(2, 20, {1, 2, 3, 6});
    const GeneratorSchedule ns(code(1, 2, 3, 6, Mode::Nonsystematic), 16, 3);
    const GeneratorSchedule sy(code(1, 2, 3, 6, Mode::SystematicPec), 16, 3);
    CHECK(codec_error_slots(ns, tr, 6) == std::vector<std::int64_t>{1});
    CHECK(codec_error_slots(sy, tr, 6) == std::vector<std::int64_t>{1, 2, 3});
    CHECK(decodability_report(ns, tr, 6) == full_rank_oracle(ns, tr, 6));
    CHECK(decodability_report(sy, tr, 6) == full_rank_oracle(sy, tr, 6));
    // One less slot of delay and slot 2 is lost too.
    CHECK(codec_error_slots(ns, tr, 5) == std::vector<std::int64_t>{1, 2});
}

TEST_CASE("sliding decoder matches full elimination on random traces") {
    const auto sym = ChannelSpec::gilbert_elliott(0.1, 0.3, EmissionModel::binomial(4, 0.8),
                                                  EmissionModel::binomial(4, 0.2));
    const auto pkt = ChannelSpec::gilbert_elliott(0.1, 0.3, EmissionModel::packet(4, 0.85),
                                                  EmissionModel::packet(4, 0.0));
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const Trace a = sample_trace(sym, 60, seed);
        const Trace b = sample_trace(pkt, 60, seed);
        const GeneratorSchedule ns(code(2, 4, 3, 3, Mode::Nonsystematic), 16, seed);
        const GeneratorSchedule sy(code(2, 4, 3, 3, Mode::SystematicPec), 16, seed);
        CHECK(decodability_report(ns, a, 3) == full_rank_oracle(ns, a, 3));
        CHECK(decodability_report(ns, b, 3) == full_rank_oracle(ns, b, 3));
        CHECK(decodability_report(sy, b, 3) == full_rank_oracle(sy, b, 3));
        // Delay longer than memory keeps old slots in the window.
        CHECK(decodability_report(ns, a, 6) == full_rank_oracle(ns, a, 6));
    }
}

TEST_CASE("decoding recovers the transmitted symbols") {
    const auto ch = ChannelSpec::gilbert_elliott(0.1, 0.3, EmissionModel::binomial(4, 0.8),
                                                 EmissionModel::binomial(4, 0.2));
    const Trace tr = sample_trace(ch, 40, 12);
    const GeneratorSchedule g(code(2, 4, 3, 3, Mode::Nonsystematic), 16, 12);
    const auto src = random_sources(40, 2, 16, 99);
    const auto packets = encode_stream(src, g);
    const auto run = run_decoder(g, tr, 3);
    const auto dec = decode_values(g, tr, packets, 40);
    int recovered = 0;
    for (std::int64_t u = 1; u <= 40; ++u)
        for (int k = 0; k < 2; ++k)
            if (dec[u][k]) {
                REQUIRE(*dec[u][k] == src[u][k]);
                ++recovered;
            }
    CHECK(recovered > 0);
    // Slots the streaming decoder finished are determined by the full system.
    for (std::int64_t u = 1; u <= 40; ++u)
        if (run.decoded_at[u] >= 0) CHECK((dec[u][0].has_value() && dec[u][1].has_value()));
}

TEST_CASE("systematic slots received intact decode at once") {
    const Trace tr = sample_trace(ChannelSpec::iid(EmissionModel::packet(6, 0.7)), 500, 2);
    const GeneratorSchedule g(code(3, 6, 4, 4, Mode::SystematicPec), 16, 2);
    const DecodeRun run = run_decoder(g, tr, 4);
    for (std::int64_t t = 1; t <= 500; ++t)
        if (!tr.erased(t)) REQUIRE(run.decoded_at[t] == t);
}

TEST_CASE("codec errors agree with the debt characterization") {
    const auto ch = ChannelSpec::gilbert_elliott(0.02, 0.4, EmissionModel::packet(6, 0.8),
                                                 EmissionModel::packet(6, 0.0));
    const Trace tr = sample_trace(ch, 3000, 31);
    for (Mode m : {Mode::Nonsystematic, Mode::SystematicPec}) {
        const CodeParams p = code(3, 6, 5, 4, m);
        const GeneratorSchedule g(p, 24, 31);
        const DebtTrajectory traj = run_trajectory(tr, p);
        const auto debt = m == Mode::Nonsystematic ? error_slots_nrlsc(traj, p) : error_slots_srlsc(traj, tr, p);
        const std::int64_t horizon = std::min(traj.zero_hits.back(), tr.length() - p.delta);
        std::vector<std::int64_t> codec, expect;
        for (auto u : codec_error_slots(g, tr, p.delta))
            if (u <= horizon) codec.push_back(u);
        for (auto u : debt)
            if (u <= horizon) expect.push_back(u);
        CHECK(codec == expect);
    }
}

TEST_CASE("random generators pass the minor spot check over a large field") {
    const GeneratorSchedule g(code(3, 6, 4, 4, Mode::Nonsystematic), 16, 8);
    const GmdsReport rep = gmds_spot_check(g, 200, 1);
    CHECK(rep.trials == 200);
    CHECK(rep.failures == 0);
    CHECK(rep.max_size >= 8);

    // Over GF(2) every nonzero entry is 1, so larger minors are singular.
    const GeneratorSchedule tiny(code(3, 6, 4, 4, Mode::Nonsystematic), 1, 8);
    CHECK(gmds_spot_check(tiny, 50, 1).failures > 0);

    // Size-one minors are single nonzero entries.
    CHECK(gmds_spot_check(tiny, 20, 1, 1).failures == 0);
}

TEST_CASE("codec requires finite memory") {
    CodeParams p = code(1, 2, 1, 1, Mode::Nonsystematic);
    p.alpha.reset();
    CHECK_THROWS_AS(GeneratorSchedule(p, 16, 1), ContractError);
}
