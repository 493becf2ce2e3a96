#include "rlsc/baseline.hpp"

#include <string>

namespace rlsc {

PrimeField::PrimeField(std::uint32_t p) : p_(p) {
    require(p >= 2 && p < (1u << 16), "PrimeField: modulus must be in [2, 65536)");
    for (std::uint32_t d = 2; d * d <= p; ++d)
        require(p % d != 0, "PrimeField: modulus " + std::to_string(p) + " is not prime");
}

Element PrimeField::inv(Element a) const {
    if (a % p_ == 0) throw std::domain_error("PrimeField: zero has no inverse");
    // Fermat: a^(p-2).
    std::uint64_t r = 1, b = a % p_;
    for (std::uint32_t e = p_ - 2; e; e >>= 1) {
        if (e & 1) r = r * b % p_;
        b = b * b % p_;
    }
    return static_cast<Element>(r);
}

void BaselineCode::validate(std::uint32_t field_size) const {
    require(static_cast<int>(G.size()) == K, name + ": generator must have K rows");
    for (const auto& row : G) {
        require(static_cast<int>(row.size()) == N, name + ": generator rows must have N entries");
        for (int v : row) require(v >= 0 && static_cast<std::uint32_t>(v) < field_size, name + ": entry outside field");
    }
    for (int i = 0; i < K; ++i)
        for (int j = 0; j < K; ++j) require(G[i][j] == (i == j ? 1 : 0), name + ": left K x K block must be identity");
}

namespace {

BaselineCode make(std::string name, int delta, std::vector<std::vector<int>> G) {
    BaselineCode c;
    c.name = std::move(name);
    c.K = static_cast<int>(G.size());
    c.N = static_cast<int>(G.front().size());
    c.delta = delta;
    c.W = delta + 1;
    c.B = c.N - c.K;
    c.M = delta - c.K + 1;
    c.G = std::move(G);
    return c;
}

} // namespace

const std::vector<BaselineCode>& builtin_codes() {
    static const std::vector<BaselineCode> codes = {
        make("k3n6", 4, {{1, 0, 0, 1, 1, 0}, {0, 1, 0, 0, 1, 1}, {0, 0, 1, 0, 1, 2}}),
        make("k4n7", 5, {{1, 0, 0, 0, 1, 2, 0}, {0, 1, 0, 0, 0, 1, 3}, {0, 0, 1, 0, 0, 2, 1}, {0, 0, 0, 1, 1, 1, 1}}),
        make("k4n10", 7,
             {{1, 0, 0, 0, 1, 4, 16, 64, 0, 0},
              {0, 1, 0, 0, 1, 3, 0, 27, 81, 0},
              {0, 0, 1, 0, 1, 2, 0, 0, 16, 32},
              {0, 0, 0, 1, 1, 1, 0, 0, 1, 1}}),
        make("k6n10", 7,
             {{1, 0, 0, 0, 0, 0, 1, 6, 0, 0},
              {0, 1, 0, 0, 0, 0, 0, 5, 25, 0},
              {0, 0, 1, 0, 0, 0, 0, 0, 16, 64},
              {0, 0, 0, 1, 0, 0, 0, 0, 9, 27},
              {0, 0, 0, 0, 1, 0, 1, 2, 4, 8},
              {0, 0, 0, 0, 0, 1, 1, 1, 1, 1}}),
    };
    return codes;
}

const BaselineCode& baseline_by_name(const std::string& name) {
    for (const auto& c : builtin_codes())
        if (c.name == name) return c;
    throw ContractError("unknown baseline code '" + name + "' (known: k3n6, k4n7, k4n10, k6n10)");
}

SparseRow baseline_row(const BaselineCode& code, const PrimeField& f, std::int64_t t, int j) {
    SparseRow r;
    const int K = code.K;
    // Codeword started at slot t - j; its i-th source symbol was sent at slot t - j + i.
    for (int i = 0; i < K; ++i) {
        const Element g = static_cast<Element>(code.G[i][j]) % f.modulus();
        const std::int64_t u = j < K ? t : t - j + i;
        if (j < K && i != j) continue;
        if (g == 0 || u < 1) continue;
        r.emplace_back((u - 1) * K + i, g);
    }
    return r;
}

BaselineRun run_baseline(const BaselineCode& code, const Trace& trace, int delay, std::uint32_t field) {
    const PrimeField f(field);
    code.validate(field);
    require(trace.packet_mode, "baseline codes need a packet-mode trace");
    require(trace.N == code.N, "baseline: trace N differs from the code");
    const std::int64_t T = trace.length();
    BaselineRun run;
    run.decoded_at.assign(static_cast<std::size_t>(T + 1), -1);
    SlidingDecoder<PrimeField> dec(f, code.K, code.memory(), delay);
    for (std::int64_t t = 1; t <= T; ++t) {
        dec.open_slot();
        if (!trace.erased(t))
            for (int j = 0; j < code.N; ++j) dec.add_row(baseline_row(code, f, t, j));
        dec.close_slot(run.decoded_at);
        if (dec.clean()) run.clean_at.push_back(t);
    }
    return run;
}

std::vector<std::int64_t> baseline_error_slots(const BaselineCode& code, const Trace& trace, int delay,
                                               std::uint32_t field) {
    const BaselineRun run = run_baseline(code, trace, delay, field);
    std::vector<std::int64_t> out;
    for (std::int64_t u = 1; u + delay <= trace.length(); ++u) {
        const std::int64_t d = run.decoded_at[u];
        if (d < 0 || d > u + delay) out.push_back(u);
    }
    return out;
}

} // namespace rlsc
