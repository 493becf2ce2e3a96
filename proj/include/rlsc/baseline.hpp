#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rlsc/channels.hpp"
#include "rlsc/decoder.hpp"
#include "rlsc/errors.hpp"

namespace rlsc {

// Prime field GF(p), p < 2^16 so products fit in 32 bits.
class PrimeField {
public:
    explicit PrimeField(std::uint32_t p = 257);

    std::uint32_t modulus() const { return p_; }
    Element zero() const { return 0; }
    Element one() const { return 1; }
    Element add(Element a, Element b) const { return (a + b) % p_; }
    Element sub(Element a, Element b) const { return (a + p_ - b) % p_; }
    Element mul(Element a, Element b) const { return static_cast<Element>((std::uint64_t{a} * b) % p_); }
    Element inv(Element a) const;

private:
    std::uint32_t p_;
};

// Deterministic burst/isolated-erasure streaming code given by a K x N block
// generator, spread over time by diagonal interleaving: codeword symbol j is
// sent in the j-th packet after the codeword starts, so a burst of b packets
// erases at most b symbols of any codeword.
struct BaselineCode {
    std::string name;
    int K = 0;
    int N = 0;
    int delta = 0;
    int W = 0;  // sliding window length, delta + 1
    int B = 0;  // longest correctable burst, N - K
    int M = 0;  // correctable arbitrary erasures per window, delta - K + 1
    std::vector<std::vector<int>> G;

    int memory() const { return N - 1; }
    void validate(std::uint32_t field_size) const;
};

// The four printed codes: k3n6, k4n7, k4n10, k6n10.
const std::vector<BaselineCode>& builtin_codes();
const BaselineCode& baseline_by_name(const std::string& name);

// Symbol j of packet t as (absolute column, coefficient) pairs; column
// (u - 1) K + i is source symbol i of slot u. Slots before 1 are zero.
SparseRow baseline_row(const BaselineCode& code, const PrimeField& f, std::int64_t t, int j);

struct BaselineRun {
    std::vector<std::int64_t> decoded_at;
    std::vector<std::int64_t> clean_at;
};

BaselineRun run_baseline(const BaselineCode& code, const Trace& trace, int delay, std::uint32_t field = 257);
// Slots whose deadline lies inside the trace and which miss it.
std::vector<std::int64_t> baseline_error_slots(const BaselineCode& code, const Trace& trace, int delay,
                                               std::uint32_t field = 257);

} // namespace rlsc
