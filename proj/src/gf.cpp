#include "rlsc/gf.hpp"

#include <array>
#include <string>

#include "rlsc/rng.hpp"

namespace rlsc {

namespace {

// Primitive polynomials, bit i = coefficient of x^i.
constexpr std::array<std::uint64_t, 33> kPolynomials = {
    0x0,                                                          // unused
    0x3,         0x7,         0xB,         0x13,        0x25,        // q = 1..5
    0x43,        0x89,        0x11D,       0x211,       0x409,       // q = 6..10
    0x805,       0x1053,      0x201B,      0x4443,      0x8003,      // q = 11..15
    0x1100B,     0x20009,     0x40081,     0x80027,     0x100009,    // q = 16..20
    0x200005,    0x400003,    0x800021,    0x100001B,   0x2000009,   // q = 21..25
    0x4000047,   0x8000027,   0x10000009,  0x20000005,  0x40000053,  // q = 26..30
    0x80000009,  0x1000000AFULL,                                   // q = 31..32
};

constexpr int kTableLimit = 16;

} // namespace

std::uint64_t canonical_polynomial(int q) {
    require(q >= 1 && q <= 32, "GF(2^q): q must be in [1, 32], got " + std::to_string(q));
    return kPolynomials[q];
}

GF2Field::GF2Field(int q) : q_(q), poly_(canonical_polynomial(q)) {
    if (q_ > kTableLimit) return;
    const std::uint32_t n = (1u << q_) - 1;
    exp_.assign(2 * static_cast<std::size_t>(n) + 2, 0);
    log_.assign(static_cast<std::size_t>(n) + 1, 0);
    std::uint64_t x = 1;
    for (std::uint32_t i = 0; i < n; ++i) {
        if (i > 0 && x == 1) throw NumericalError("GF(2^q): reduction polynomial is not primitive");
        exp_[i] = static_cast<Element>(x);
        log_[x] = i;
        x <<= 1;
        if (x >> q_) x ^= poly_;
    }
    for (std::uint32_t i = n; i < exp_.size(); ++i) exp_[i] = exp_[i - n];
}

Element GF2Field::mul_slow(Element a, Element b) const {
    std::uint64_t acc = 0;
    std::uint64_t x = a;
    const std::uint64_t top = std::uint64_t{1} << q_;
    while (b) {
        if (b & 1u) acc ^= x;
        b >>= 1;
        x <<= 1;
        if (x & top) x ^= poly_;
    }
    return static_cast<Element>(acc);
}

Element GF2Field::mul(Element a, Element b) const {
    if (a == 0 || b == 0) return 0;
    if (q_ <= kTableLimit) return exp_[log_[a] + log_[b]];
    return mul_slow(a, b);
}

Element GF2Field::inv(Element a) const {
    if (a == 0) throw std::domain_error("GF(2^q): inverse of zero");
    if (q_ <= kTableLimit) {
        const std::uint32_t n = (1u << q_) - 1;
        return exp_[(n - log_[a]) % n];
    }
    // a^(2^q - 2) by square-and-multiply.
    std::uint64_t e = size() - 2;
    Element base = a, result = 1;
    while (e) {
        if (e & 1) result = mul_slow(result, base);
        base = mul_slow(base, base);
        e >>= 1;
    }
    return result;
}

FieldMatrix random_matrix(const GF2Field& f, int rows, int cols, std::uint64_t seed) {
    require(rows >= 1 && cols >= 1, "random_matrix: dimensions must be positive");
    FieldMatrix m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            m.at(r, c) = f.nonzero_from(stream_word(seed, static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(c)));
    return m;
}

} // namespace rlsc
