#include "rlsc/codec.hpp"

#include <algorithm>
#include <numeric>

#include "rlsc/errors.hpp"
#include "rlsc/rng.hpp"

namespace rlsc {

GeneratorSchedule::GeneratorSchedule(const CodeParams& p, int q, std::uint64_t seed)
    : p_(p), field_(q), seed_(seed) {
    p_.validate();
    require(!p_.infinite_memory(), "codec: memory alpha must be finite");
}

std::int64_t GeneratorSchedule::window_start(std::int64_t t) const {
    return std::max<std::int64_t>(1, t - memory());
}

Element GeneratorSchedule::entry(std::int64_t t, int row, std::int64_t slot, int k) const {
    const int K = p_.K;
    if (p_.mode == Mode::SystematicPec && row < K) return slot == t && k == row ? 1 : 0;
    const std::uint64_t lane = (static_cast<std::uint64_t>(row) << 40) ^
                               (static_cast<std::uint64_t>(t - slot) << 20) ^ static_cast<std::uint64_t>(k);
    return field_.nonzero_from(stream_word(seed_, static_cast<std::uint64_t>(t), lane));
}

FieldMatrix GeneratorSchedule::make_generator(std::int64_t t) const {
    require(t >= 1, "make_generator: t must be >= 1");
    const std::int64_t first = window_start(t);
    const int K = p_.K;
    FieldMatrix G(p_.N, static_cast<int>((t - first + 1) * K));
    for (int i = 0; i < p_.N; ++i)
        for (std::int64_t u = first; u <= t; ++u)
            for (int k = 0; k < K; ++k) G.at(i, static_cast<int>((u - first) * K + k)) = entry(t, i, u, k);
    return G;
}

SparseRow GeneratorSchedule::generator_row(std::int64_t t, int row) const {
    SparseRow r;
    const int K = p_.K;
    if (p_.mode == Mode::SystematicPec && row < K) {
        r.emplace_back((t - 1) * K + row, 1);
        return r;
    }
    for (std::int64_t u = window_start(t); u <= t; ++u)
        for (int k = 0; k < K; ++k) r.emplace_back((u - 1) * K + k, entry(t, row, u, k));
    return r;
}

std::vector<std::vector<Element>> encode_stream(const std::vector<std::vector<Element>>& sources,
                                                const GeneratorSchedule& g) {
    const int K = g.params().K;
    const GF2Field& f = g.field();
    std::vector<std::vector<Element>> out(sources.size());
    for (std::size_t t = 1; t < sources.size(); ++t) {
        require(static_cast<int>(sources[t].size()) == K, "encode_stream: each slot needs K source symbols");
        out[t].assign(g.params().N, 0);
        for (int i = 0; i < g.params().N; ++i) {
            Element acc = 0;
            for (const auto& [col, a] : g.generator_row(static_cast<std::int64_t>(t), i))
                acc = f.add(acc, f.mul(a, sources[col / K + 1][col % K]));
            out[t][i] = acc;
        }
    }
    return out;
}

int received_rows(const Trace& trace, std::int64_t t) {
    return trace.received[t];
}

FieldMatrix receiver_matrix(const GeneratorSchedule& g, const Trace& trace, std::int64_t t) {
    require(t >= 0 && t <= trace.length(), "receiver_matrix: t beyond the trace");
    int rows = 0;
    for (std::int64_t u = 1; u <= t; ++u) rows += received_rows(trace, u);
    FieldMatrix H(rows, static_cast<int>(t * g.params().K));
    int r = 0;
    for (std::int64_t u = 1; u <= t; ++u)
        for (int i = 0; i < received_rows(trace, u); ++i, ++r)
            for (const auto& [col, a] : g.generator_row(u, i)) H.at(r, static_cast<int>(col)) = a;
    return H;
}

DecodeRun run_decoder(const GeneratorSchedule& g, const Trace& trace, int delay) {
    require(trace.N == g.params().N, "run_decoder: trace N differs from the code");
    const std::int64_t T = trace.length();
    DecodeRun run;
    run.decoded_at.assign(static_cast<std::size_t>(T + 1), -1);
    SlidingDecoder<GF2Field> dec(g.field(), g.params().K, g.memory(), delay);
    for (std::int64_t t = 1; t <= T; ++t) {
        dec.open_slot();
        for (int i = 0; i < received_rows(trace, t); ++i) dec.add_row(g.generator_row(t, i));
        dec.close_slot(run.decoded_at);
        if (dec.clean()) run.clean_at.push_back(t);
    }
    return run;
}

std::vector<std::int8_t> decodability_report(const GeneratorSchedule& g, const Trace& trace, int delay) {
    const DecodeRun run = run_decoder(g, trace, delay);
    const std::int64_t T = trace.length();
    std::vector<std::int8_t> out(static_cast<std::size_t>(T + 1), -1);
    for (std::int64_t u = 1; u + delay <= T; ++u) {
        const std::int64_t d = run.decoded_at[u];
        out[u] = d >= 0 && d <= u + delay ? 1 : 0;
    }
    return out;
}

std::vector<std::int64_t> codec_error_slots(const GeneratorSchedule& g, const Trace& trace, int delay) {
    const auto rep = decodability_report(g, trace, delay);
    std::vector<std::int64_t> out;
    for (std::size_t u = 1; u < rep.size(); ++u)
        if (rep[u] == 0) out.push_back(static_cast<std::int64_t>(u));
    return out;
}

std::vector<std::vector<std::optional<Element>>> decode_values(const GeneratorSchedule& g, const Trace& trace,
                                                               const std::vector<std::vector<Element>>& packets,
                                                               std::int64_t t) {
    const GF2Field& f = g.field();
    const int K = g.params().K;
    const FieldMatrix H = receiver_matrix(g, trace, t);
    FieldMatrix A(H.rows, H.cols + 1);
    int r = 0;
    for (std::int64_t u = 1; u <= t; ++u)
        for (int i = 0; i < received_rows(trace, u); ++i, ++r) {
            for (int c = 0; c < H.cols; ++c) A.at(r, c) = H.at(r, c);
            A.at(r, H.cols) = packets[u][i];
        }
    const int rank = row_reduce(f, A);
    // Back substitution to reduced form.
    for (int i = rank - 1; i >= 0; --i) {
        int lead = 0;
        while (A.at(i, lead) == 0) ++lead;
        for (int j = 0; j < i; ++j) {
            const Element a = A.at(j, lead);
            if (a == 0) continue;
            for (int c = lead; c < A.cols; ++c) A.at(j, c) = f.sub(A.at(j, c), f.mul(a, A.at(i, c)));
        }
    }
    std::vector<std::vector<std::optional<Element>>> out(static_cast<std::size_t>(t + 1),
                                                         std::vector<std::optional<Element>>(K));
    for (int i = 0; i < rank; ++i) {
        int lead = 0;
        while (A.at(i, lead) == 0) ++lead;
        if (lead == H.cols) continue;  // inconsistent system; cannot happen for encoded data
        bool unit = true;
        for (int c = lead + 1; c < H.cols && unit; ++c)
            if (A.at(i, c)) unit = false;
        if (unit) out[lead / K + 1][lead % K] = A.at(i, H.cols);
    }
    return out;
}

GmdsReport gmds_spot_check(const GeneratorSchedule& g, int trials, std::uint64_t seed, int max_size,
                           std::int64_t slots) {
    require(trials >= 1, "gmds_spot_check: trials must be >= 1");
    require(max_size >= 1, "gmds_spot_check: max_size must be >= 1");
    const CodeParams& p = g.params();
    if (slots <= 0) slots = g.memory() + 3;
    // Cumulative generator: every row of every slot, all received.
    const std::int64_t rows_total = slots * p.N;
    FieldMatrix G(static_cast<int>(rows_total), static_cast<int>(slots * p.K));
    std::vector<int> candidate_rows;
    for (std::int64_t t = 1; t <= slots; ++t)
        for (int i = 0; i < p.N; ++i) {
            const int r = static_cast<int>((t - 1) * p.N + i);
            for (const auto& [col, a] : g.generator_row(t, i)) G.at(r, static_cast<int>(col)) = a;
            if (p.mode == Mode::SystematicPec && i < p.K) continue;
            candidate_rows.push_back(r);
        }

    GmdsReport rep;
    std::uint64_t draw = 0;
    auto next = [&](std::uint64_t bound) { return stream_word(seed, draw++, 0) % bound; };
    for (int trial = 0; trial < trials; ++trial) {
        const int target = 1 + static_cast<int>(next(static_cast<std::uint64_t>(max_size)));
        std::vector<int> rows = candidate_rows;
        for (std::size_t i = rows.size(); i > 1; --i) std::swap(rows[i - 1], rows[next(i)]);
        std::vector<std::uint8_t> used(G.cols, 0);
        std::vector<int> R, C;
        for (int r : rows) {
            if (static_cast<int>(R.size()) == target) break;
            std::vector<int> options;
            for (int c = 0; c < G.cols; ++c)
                if (!used[c] && G.at(r, c) != 0) options.push_back(c);
            if (options.empty()) continue;
            const int c = options[next(options.size())];
            used[c] = 1;
            R.push_back(r);
            C.push_back(c);
        }
        const int n = static_cast<int>(R.size());
        FieldMatrix S(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) S.at(i, j) = G.at(R[i], C[j]);
        ++rep.trials;
        rep.max_size = std::max(rep.max_size, n);
        if (matrix_rank(g.field(), S) < n) ++rep.failures;
    }
    return rep;
}

} // namespace rlsc
