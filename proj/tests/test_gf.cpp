#include <doctest.h>

#include <stdexcept>

#include "rlsc/gf.hpp"
#include "rlsc/rng.hpp"

using namespace rlsc;

namespace {

// Polynomials over GF(2) as bit masks, reduced modulo f of degree q.
std::uint64_t polymulmod(std::uint64_t a, std::uint64_t b, std::uint64_t f, int q) {
    std::uint64_t acc = 0;
    for (int i = q - 1; i >= 0; --i) {
        acc <<= 1;
        if (acc >> q & 1) acc ^= f;
        if (b >> i & 1) acc ^= a;
    }
    return acc;
}

std::uint64_t polygcd(std::uint64_t a, std::uint64_t b) {
    auto deg = [](std::uint64_t x) { return x ? 63 - __builtin_clzll(x) : -1; };
    while (b) {
        while (a && deg(a) >= deg(b)) a ^= b << (deg(a) - deg(b));
        std::swap(a, b);
    }
    return a;
}

// x^(2^k) mod f.
std::uint64_t frobenius(int k, std::uint64_t f, int q) {
    std::uint64_t x = q > 1 ? 2 : (2 ^ f);
    for (int i = 0; i < k; ++i) x = polymulmod(x, x, f, q);
    return x;
}

// Rabin's irreducibility test.
bool irreducible(std::uint64_t f, int q) {
    const std::uint64_t x = q > 1 ? 2 : (2 ^ f);
    if (frobenius(q, f, q) != x) return false;
    for (int r = 2; r <= q; ++r) {
        if (q % r) continue;
        bool prime = true;
        for (int d = 2; d * d <= r; ++d) prime = prime && r % d;
        if (!prime) continue;
        if (polygcd(f, frobenius(q / r, f, q) ^ x) != 1) return false;
    }
    return true;
}

// Independent multiplication: carry-less product then reduction.
Element reference_mul(Element a, Element b, int q) {
    return static_cast<Element>(polymulmod(a, b, canonical_polynomial(q), q));
}

} // namespace

TEST_CASE("canonical polynomials are irreducible of the right degree") {
    for (int q = 1; q <= 32; ++q) {
        const std::uint64_t f = canonical_polynomial(q);
        CHECK((f >> q) == 1);
        CHECK(irreducible(f, q));
    }
    CHECK_THROWS_AS(canonical_polynomial(0), ContractError);
    CHECK_THROWS_AS(canonical_polynomial(33), ContractError);
}

TEST_CASE("table fields build, so the polynomial is primitive") {
    for (int q = 1; q <= 16; ++q) CHECK_NOTHROW(GF2Field{q});
}

TEST_CASE("multiplication matches the carry-less reference") {
    for (int q : {3, 8, 16, 24, 32}) {
        const GF2Field f(q);
        for (std::uint64_t i = 0; i < 2000; ++i) {
            const Element a = static_cast<Element>(stream_word(7, i, 0) & (f.size() - 1));
            const Element b = static_cast<Element>(stream_word(7, i, 1) & (f.size() - 1));
            REQUIRE(f.mul(a, b) == reference_mul(a, b, q));
        }
    }
}

TEST_CASE("field axioms on random elements") {
    for (int q : {4, 8, 16, 24}) {
        const GF2Field f(q);
        for (std::uint64_t i = 0; i < 1000; ++i) {
            const Element a = f.nonzero_from(stream_word(3, i, 0));
            const Element b = f.nonzero_from(stream_word(3, i, 1));
            const Element c = f.nonzero_from(stream_word(3, i, 2));
            REQUIRE(f.mul(a, b) == f.mul(b, a));
            REQUIRE(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
            REQUIRE(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
            REQUIRE(f.mul(a, f.inv(a)) == 1);
            REQUIRE(f.mul(a, 1) == a);
            REQUIRE(f.add(a, a) == 0);
        }
    }
}

TEST_CASE("inverse of zero is a domain error") {
    CHECK_THROWS_AS(GF2Field(8).inv(0), std::domain_error);
    CHECK_THROWS_AS(GF2Field(24).inv(0), std::domain_error);
}

TEST_CASE("nonzero_from never yields zero") {
    const GF2Field f(2);
    for (std::uint64_t w = 0; w < 100; ++w) {
        const Element e = f.nonzero_from(w);
        CHECK(e >= 1);
        CHECK(e < 4);
    }
}

TEST_CASE("rank of structured and random matrices") {
    const GF2Field f(16);
    CHECK(matrix_rank(f, FieldMatrix::identity(7)) == 7);

    FieldMatrix dup(3, 4);
    for (int c = 0; c < 4; ++c) {
        dup.at(0, c) = static_cast<Element>(c + 1);
        dup.at(1, c) = f.mul(5, static_cast<Element>(c + 1));
        dup.at(2, c) = static_cast<Element>(c * c + 2);
    }
    CHECK(matrix_rank(f, dup) == 2);
    CHECK(matrix_rank(f, FieldMatrix(4, 4)) == 0);

    int full = 0;
    for (std::uint64_t s = 0; s < 20; ++s) full += matrix_rank(f, random_matrix(f, 12, 12, s)) == 12;
    CHECK(full >= 19);
}

TEST_CASE("row-space membership") {
    const GF2Field f(8);
    FieldMatrix m(2, 3);
    m.at(0, 0) = 1;
    m.at(0, 1) = 2;
    m.at(1, 1) = 1;
    m.at(1, 2) = 3;
    // 4 * row0 + 7 * row1
    const std::vector<Element> in = {4, f.add(f.mul(4, 2), 7), f.mul(7, 3)};
    CHECK(row_space_contains(f, m, in));
    CHECK_FALSE(row_space_contains(f, m, {0, 0, 1}));
    CHECK(row_space_contains(f, m, {0, 0, 0}));
    CHECK_THROWS_AS(row_space_contains(f, m, {1, 2}), ContractError);
}
