#pragma once

#include <cstdint>
#include <vector>

namespace rlsc {

// Exact Catalan number, n <= 35 (fits in 64 bits).
std::uint64_t catalan(int n);
// log C_n via log-gamma, any n >= 0.
double log_catalan(int n);

// Mean debt-cycle length of the rate-1/2, infinite-memory systematic code on an
// i.i.d. packet channel with delivery probability p, via adaptive quadrature.
double expected_interval_integral(double p);
// Same quantity from the n_K-point spectral sum.
double expected_interval_truncated(double p, int n_K);

// Sum over j <= 2l - delta - 1 of the number of valid 2l-paths whose j-th step is up.
std::int64_t nup_sum(int l, int delta);
// Alternative closed form split by the parity of delta.
std::int64_t nup_sum_piecewise(int l, int delta);
// N_up(l, j) for j = 1..2l by the odd-step decrement recursion (index 0 unused).
std::vector<std::int64_t> nup_recursion(int l);
// N_up(l, j) by dynamic programming over lattice paths, l <= 12.
std::int64_t nup_oracle(int l, int j);

struct SeriesResult {
    double value = 0.0;
    int l_max_used = 0;
    double tail_bound = 0.0;
    bool converged = true;  // tail bound below 1e-10 of the partial sum
};

// Expected erased slots past the delay per cycle. l_max = 0 picks the
// truncation automatically (capped at 2000).
SeriesResult expected_errors(double p, int delta, int l_max = 0);

struct SrlscInfiniteResult {
    double pe = 0.0;
    double numerator = 0.0;
    double denominator = 0.0;
    int l_max_used = 0;
    double tail_bound = 0.0;
    bool converged = true;
};

SrlscInfiniteResult pe_srlsc_infinite(double p, int delta, int l_max = 0);

} // namespace rlsc
