#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rlsc/errors.hpp"

namespace rlsc {

using Element = std::uint32_t;

// Canonical reduction polynomial for GF(2^q), including the x^q term.
// All entries are primitive, so x generates the multiplicative group.
std::uint64_t canonical_polynomial(int q);

// GF(2^q) for 1 <= q <= 32. Tables are used up to q = 16, shift-and-add
// multiplication beyond that.
class GF2Field {
public:
    explicit GF2Field(int q);

    int bits() const { return q_; }
    std::uint64_t size() const { return std::uint64_t{1} << q_; }
    std::uint64_t polynomial() const { return poly_; }

    Element zero() const { return 0; }
    Element one() const { return 1; }
    Element add(Element a, Element b) const { return a ^ b; }
    Element sub(Element a, Element b) const { return a ^ b; }
    Element mul(Element a, Element b) const;
    Element inv(Element a) const;

    // Maps a random 64-bit word to a nonzero element.
    Element nonzero_from(std::uint64_t word) const {
        return static_cast<Element>(1 + word % (size() - 1));
    }

private:
    Element mul_slow(Element a, Element b) const;

    int q_;
    std::uint64_t poly_;
    std::vector<std::uint32_t> log_;
    std::vector<Element> exp_;
};

struct FieldMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<Element> entries;

    FieldMatrix() = default;
    FieldMatrix(int r, int c) : rows(r), cols(c), entries(static_cast<std::size_t>(r) * c, 0) {}

    Element& at(int r, int c) { return entries[static_cast<std::size_t>(r) * cols + c]; }
    Element at(int r, int c) const { return entries[static_cast<std::size_t>(r) * cols + c]; }

    static FieldMatrix identity(int n) {
        FieldMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }
};

// Every entry uniform over the nonzero elements; deterministic in seed.
FieldMatrix random_matrix(const GF2Field& f, int rows, int cols, std::uint64_t seed);

// In-place reduction to row echelon form with first-nonzero pivoting.
// Returns the rank.
template <class Field>
int row_reduce(const Field& f, FieldMatrix& m) {
    int rank = 0;
    for (int c = 0; c < m.cols && rank < m.rows; ++c) {
        int piv = -1;
        for (int r = rank; r < m.rows; ++r)
            if (m.at(r, c) != 0) { piv = r; break; }
        if (piv < 0) continue;
        if (piv != rank)
            for (int k = 0; k < m.cols; ++k) std::swap(m.at(piv, k), m.at(rank, k));
        const Element s = f.inv(m.at(rank, c));
        for (int k = c; k < m.cols; ++k) m.at(rank, k) = f.mul(m.at(rank, k), s);
        for (int r = rank + 1; r < m.rows; ++r) {
            const Element a = m.at(r, c);
            if (a == 0) continue;
            for (int k = c; k < m.cols; ++k) m.at(r, k) = f.sub(m.at(r, k), f.mul(a, m.at(rank, k)));
        }
        ++rank;
    }
    return rank;
}

template <class Field>
int matrix_rank(const Field& f, FieldMatrix m) {
    return row_reduce(f, m);
}

template <class Field>
bool row_space_contains(const Field& f, const FieldMatrix& m, const std::vector<Element>& v) {
    require(static_cast<int>(v.size()) == m.cols, "row_space_contains: vector length != matrix columns");
    FieldMatrix e = m;
    const int rank = row_reduce(f, e);
    std::vector<Element> w = v;
    // Echelon rows have increasing leading columns; eliminate in order.
    for (int r = 0; r < rank; ++r) {
        int lead = 0;
        while (e.at(r, lead) == 0) ++lead;
        const Element a = w[lead];
        if (a == 0) continue;
        for (int k = lead; k < e.cols; ++k) w[k] = f.sub(w[k], f.mul(a, e.at(r, k)));
    }
    for (Element x : w)
        if (x != 0) return false;
    return true;
}

} // namespace rlsc
