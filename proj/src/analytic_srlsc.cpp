#include "rlsc/analytic_srlsc.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

#include <spdlog/spdlog.h>

#include "rlsc/errors.hpp"

namespace rlsc {

namespace {

using i128 = __int128;

void require_p(double p) {
    if (!(p > 0.5 && p <= 1.0))
        throw ContractError("p = " + std::to_string(p) +
                            " is not in (1/2, 1]: the debt walk is not positive recurrent");
}

std::int64_t narrow(i128 v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw NumericalError("path count exceeds 64-bit range");
    return static_cast<std::int64_t>(v);
}

i128 C(int n) { return static_cast<i128>(catalan(n)); }

double integrand(double p, double x) {
    const double a = 2.0 * std::sqrt(p * (1.0 - p));
    const double d = 1.0 - a * std::cos(std::numbers::pi * x);
    const double s = std::sin(std::numbers::pi * x);
    return (1.0 + 1.0 / d) * s * s / d;
}

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
               double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

} // namespace

std::uint64_t catalan(int n) {
    require(n >= 0 && n <= 35, "catalan: exact values need 0 <= n <= 35, got " + std::to_string(n));
    // C_{k+1} = C_k * 2(2k+1) / (k+2), exact in 128-bit intermediate.
    unsigned __int128 c = 1;
    for (int k = 0; k < n; ++k) c = c * (2 * (2 * k + 1)) / (k + 2);
    return static_cast<std::uint64_t>(c);
}

double log_catalan(int n) {
    require(n >= 0, "log_catalan: n must be >= 0");
    return std::lgamma(2.0 * n + 1.0) - 2.0 * std::lgamma(n + 1.0) - std::log(n + 1.0);
}

double expected_interval_integral(double p) {
    require_p(p);
    if (p == 1.0) return 1.0;
    const auto f = [p](double x) { return integrand(p, x); };
    // Bisect once so the smallest denominator (near x = 0) gets its own panels.
    double total = 0.0;
    const double cuts[] = {0.0, 0.125, 0.5, 1.0};
    for (int i = 0; i < 3; ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
        const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        total += simpson(f, a, b, fa, fm, fb, whole, 1e-10, 60);
    }
    return p + 2.0 * p * (1.0 - p) * total;
}

double expected_interval_truncated(double p, int n_K) {
    require_p(p);
    require(n_K >= 1, "expected_interval_truncated: n_K must be >= 1");
    double sum = 0.0;
    for (int j = 1; j <= n_K; ++j) sum += integrand(p, static_cast<double>(j) / (n_K + 1));
    return p + 2.0 * p * (1.0 - p) / (n_K + 1) * sum;
}

std::int64_t nup_sum(int l, int delta) {
    require(delta >= 0 && 2 * l >= delta + 2, "nup_sum: need 2l >= delta + 2");
    i128 total = static_cast<i128>(2 * l - delta - 1) * C(l - 1);
    // Upper index l - floor(delta/2) - 2: the printed bound stops one short,
    // which drops the last odd-step decrement when delta is even. For odd
    // delta the extra term has coefficient zero.
    for (int i = 0; i <= l - delta / 2 - 2; ++i) total -= C(i) * C(l - 2 - i) * (2 * l - delta - 3 - 2 * i);
    return narrow(total);
}

std::int64_t nup_sum_piecewise(int l, int delta) {
    require(delta >= 0 && 2 * l >= delta + 2, "nup_sum_piecewise: need 2l >= delta + 2");
    const int J = (2 * l - delta - 1) / 2;
    i128 inner = 0;
    if (delta % 2 == 1) {
        for (int j = 0; j <= J - 2; ++j) inner += C(j) * C(l - 2 - j) * (J - 1 - j);
        return narrow(2 * (static_cast<i128>(J) * C(l - 1) - inner));
    }
    // Odd prefix length 2J + 1 also takes the decrement at step 2J + 1.
    for (int j = 0; j <= J - 1; ++j) inner += C(j) * C(l - 2 - j) * (2 * J - 1 - 2 * j);
    return narrow(static_cast<i128>(2 * J + 1) * C(l - 1) - inner);
}

std::vector<std::int64_t> nup_recursion(int l) {
    require(l >= 1, "nup_recursion: l must be >= 1");
    std::vector<i128> n(2 * l + 1, 0);
    n[1] = C(l - 1);
    for (int j = 2; j <= 2 * l; ++j) {
        if (j % 2 == 0) {
            n[j] = n[j - 1];
        } else {
            const int a = (j - 1) / 2 - 1, b = (2 * l + 1 - j) / 2 - 1;
            n[j] = n[j - 1] - (a >= 0 && b >= 0 ? C(a) * C(b) : 0);
        }
    }
    // The last step always goes down. For l >= 2 the decrements already reach
    // zero there; for l = 1 there is no odd step to subtract at.
    n[2 * l] = 0;
    std::vector<std::int64_t> out(2 * l + 1, 0);
    for (int j = 1; j <= 2 * l; ++j) out[j] = narrow(n[j]);
    return out;
}

std::int64_t nup_oracle(int l, int j) {
    require(l >= 1 && l <= 12, "nup_oracle: l must be in [1, 12]");
    require(j >= 1 && j <= 2 * l, "nup_oracle: j must be in [1, 2l]");
    const int len = 2 * l;
    // fwd[i][h]: prefixes of i steps at height h, positive after step 0.
    std::vector<std::vector<std::int64_t>> fwd(len + 1, std::vector<std::int64_t>(len + 2, 0));
    std::vector<std::vector<std::int64_t>> bwd(len + 1, std::vector<std::int64_t>(len + 2, 0));
    fwd[0][0] = 1;
    for (int i = 0; i < len; ++i)
        for (int h = 0; h <= len; ++h) {
            if (!fwd[i][h]) continue;
            for (int step : {+1, -1}) {
                const int g = h + step;
                if (g < 0) continue;
                if (g == 0 && i + 1 < len) continue;
                fwd[i + 1][g] += fwd[i][h];
            }
        }
    // bwd[i][h]: suffixes from step i at height h that finish at 0 on the last step only.
    bwd[len][0] = 1;
    for (int i = len - 1; i >= 0; --i)
        for (int h = 0; h <= len; ++h) {
            if (h == 0 && i > 0) continue;
            std::int64_t acc = 0;
            for (int step : {+1, -1}) {
                const int g = h + step;
                if (g < 0 || g > len) continue;
                if (g == 0 && i + 1 < len) continue;
                acc += bwd[i + 1][g];
            }
            bwd[i][h] = acc;
        }
    std::int64_t count = 0;
    for (int h = 0; h < len; ++h) count += fwd[j - 1][h] * bwd[j][h + 1];
    return count;
}

SeriesResult expected_errors(double p, int delta, int l_max) {
    require_p(p);
    require(delta >= 0, "expected_errors: delta must be >= 0");
    SeriesResult r;
    const int l0 = (delta + 1) / 2 + 1;
    if (p == 1.0) {
        r.l_max_used = l0;
        return r;
    }
    require(l_max == 0 || l_max >= l0, "expected_errors: l_max below the first contributing l");
    constexpr int kCap = 2000;
    const bool automatic = l_max == 0;
    const int last = automatic ? kCap : l_max;
    const double logx = std::log(p * (1.0 - p));
    const double limit_ratio = 4.0 * p * (1.0 - p);

    std::vector<double> logc(last + 1);
    for (int n = 0; n <= last; ++n) logc[n] = log_catalan(n);

    double sum = 0.0, prev = 0.0;
    for (int l = l0; l <= last; ++l) {
        // Bracket divided by C_{l-1} to keep every factor O(l).
        double bracket = 2.0 * l - delta - 1;
        for (int i = 0; i <= l - delta / 2 - 2; ++i)
            bracket -= std::exp(logc[i] + logc[l - 2 - i] - logc[l - 1]) * (2.0 * l - delta - 3 - 2.0 * i);
        const double term = std::exp(l * logx + logc[l - 1]) * bracket;
        sum += term;
        const double ratio = prev > 0.0 ? std::max(term / prev, limit_ratio) : limit_ratio;
        prev = term;
        r.l_max_used = l;
        r.tail_bound = ratio < 1.0 ? term * ratio / (1.0 - ratio) : INFINITY;
        if (automatic && l >= l0 + 5 && r.tail_bound < 1e-10 * sum) break;
    }
    r.value = sum;
    r.converged = r.tail_bound < 1e-10 * std::max(sum, 1e-300);
    if (!r.converged)
        spdlog::warn("expected_errors: tail bound {:.3e} above 1e-10 of the partial sum at l_max = {}", r.tail_bound,
                     r.l_max_used);
    return r;
}

SrlscInfiniteResult pe_srlsc_infinite(double p, int delta, int l_max) {
    const SeriesResult num = expected_errors(p, delta, l_max);
    SrlscInfiniteResult r;
    r.numerator = num.value;
    r.denominator = expected_interval_integral(p);
    r.pe = r.numerator / r.denominator;
    r.l_max_used = num.l_max_used;
    r.tail_bound = num.tail_bound;
    r.converged = num.converged;
    return r;
}

} // namespace rlsc
