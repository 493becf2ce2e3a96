#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rlsc/channels.hpp"
#include "rlsc/debt.hpp"
#include "rlsc/decoder.hpp"
#include "rlsc/gf.hpp"

namespace rlsc {

// Random linear streaming code over GF(2^q). Slot t sends x(t) = G_t s(t-alpha..t)
// where G_t is N x min(t, alpha+1)K and its columns are ordered by slot, oldest first.
class GeneratorSchedule {
public:
    GeneratorSchedule(const CodeParams& p, int q, std::uint64_t seed);

    const CodeParams& params() const { return p_; }
    const GF2Field& field() const { return field_; }
    std::uint64_t seed() const { return seed_; }
    int memory() const { return *p_.alpha; }

    // First slot mixed into x(t).
    std::int64_t window_start(std::int64_t t) const;
    FieldMatrix make_generator(std::int64_t t) const;
    // Row `row` of G_t as (absolute column, value) pairs.
    SparseRow generator_row(std::int64_t t, int row) const;

private:
    Element entry(std::int64_t t, int row, std::int64_t slot, int k) const;

    CodeParams p_;
    GF2Field field_;
    std::uint64_t seed_;
};

// sources[t] holds s(t) (K symbols); index 0 unused. Returns x(t) per slot.
std::vector<std::vector<Element>> encode_stream(const std::vector<std::vector<Element>>& sources,
                                                const GeneratorSchedule& g);

// Rows of G_t that reach the receiver: the first C_t (all or none in packet mode).
int received_rows(const Trace& trace, std::int64_t t);

// Cumulative H^(t): one row per received symbol up to slot t, tK columns.
FieldMatrix receiver_matrix(const GeneratorSchedule& g, const Trace& trace, std::int64_t t);

// Slot u is decoded at decoded_at[u] (-1: never within the trace).
// clean_at lists slots after which no undecoded symbol remained in the window.
struct DecodeRun {
    std::vector<std::int64_t> decoded_at;
    std::vector<std::int64_t> clean_at;
};

DecodeRun run_decoder(const GeneratorSchedule& g, const Trace& trace, int delay);

// Decodability per slot: 1 decodable within the delay, 0 not, -1 when the
// deadline u + delay lies beyond the trace. Index 0 unused.
std::vector<std::int8_t> decodability_report(const GeneratorSchedule& g, const Trace& trace, int delay);
std::vector<std::int64_t> codec_error_slots(const GeneratorSchedule& g, const Trace& trace, int delay);

// Solves H^(t) s = y by full elimination and returns the recovered symbols
// per slot (std::nullopt where not determined). Reference decoder for tests.
std::vector<std::vector<std::optional<Element>>> decode_values(const GeneratorSchedule& g, const Trace& trace,
                                                               const std::vector<std::vector<Element>>& packets,
                                                               std::int64_t t);

// Samples valid row/column index sets of the cumulative generator over
// `slots` slots and counts singular induced submatrices.
struct GmdsReport {
    int trials = 0;
    int failures = 0;
    int max_size = 0;
};
GmdsReport gmds_spot_check(const GeneratorSchedule& g, int trials, std::uint64_t seed, int max_size = 16,
                           std::int64_t slots = 0);

} // namespace rlsc
