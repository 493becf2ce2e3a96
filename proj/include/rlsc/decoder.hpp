#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "rlsc/errors.hpp"
#include "rlsc/gf.hpp"

namespace rlsc {

// Sparse coefficient of one received equation: (absolute column, value).
// Column (u - 1) * K + k holds source symbol k of slot u.
using SparseRow = std::vector<std::pair<std::int64_t, Element>>;

// Incremental reduced row echelon form over the unknown source symbols of a
// sliding window of slots. A symbol counts as decoded once a basis row is a
// unit vector at its column. Slots older than max(memory, delay) can no
// longer be touched by new equations nor matter for their deadline; rows
// pivoting there are discarded, which never affects the row space seen by
// later columns because echelon rows pivoting further right are zero there.
template <class Field>
class SlidingDecoder {
public:
    SlidingDecoder(const Field& f, int K, int memory, int delay)
        : f_(f), K_(K), keep_(std::max(memory, delay)) {
        require(K >= 1 && memory >= 0 && delay >= 0, "decoder: invalid dimensions");
    }

    // Starts slot t = slot() + 1: adds its K unknown columns.
    void open_slot() {
        ++t_;
        if (t_ == 1) base_slot_ = 1;
        for (auto& r : rows_) r.coeff.resize(r.coeff.size() + K_, 0);
        known_.resize(known_.size() + K_, 0);
        col_time_.resize(col_time_.size() + K_, -1);
        unknown_ += K_;
    }

    // Adds one received equation of the current slot.
    void add_row(const SparseRow& row) {
        const std::int64_t base = base_col();
        const std::size_t width = known_.size();
        std::vector<Element> v;
        for (const auto& [col, a] : row) {
            if (a == 0) continue;
            require(col >= 0 && col < base + static_cast<std::int64_t>(width), "decoder: column outside window");
            if (col < base) continue;  // dropped slot: lost for good, cannot be used
            const std::size_t c = static_cast<std::size_t>(col - base);
            if (known_[c]) continue;
            if (v.empty()) v.assign(width, 0);
            v[c] = f_.add(v[c], a);
        }
        if (v.empty()) return;
        for (const auto& r : rows_) {
            const Element a = v[r.pivot];
            if (a == 0) continue;
            for (std::size_t k = r.pivot; k < width; ++k)
                if (r.coeff[k]) v[k] = f_.sub(v[k], f_.mul(a, r.coeff[k]));
        }
        std::size_t p = 0;
        while (p < width && v[p] == 0) ++p;
        if (p == width) return;
        const Element s = f_.inv(v[p]);
        for (std::size_t k = p; k < width; ++k)
            if (v[k]) v[k] = f_.mul(v[k], s);
        for (auto& r : rows_) {
            const Element a = r.coeff[p];
            if (a == 0) continue;
            for (std::size_t k = p; k < width; ++k)
                if (v[k]) r.coeff[k] = f_.sub(r.coeff[k], f_.mul(a, v[k]));
        }
        rows_.push_back({p, std::move(v)});
    }

    // Finishes the current slot: records decoded symbols and retires old slots.
    // decoded_at[u] receives the slot at which slot u became fully decoded.
    void close_slot(std::vector<std::int64_t>& decoded_at) {
        const std::int64_t base = base_col();
        for (std::size_t i = 0; i < rows_.size();) {
            const auto& r = rows_[i];
            bool unit = true;
            for (std::size_t k = r.pivot + 1; k < r.coeff.size() && unit; ++k)
                if (r.coeff[k]) unit = false;
            if (!unit) {
                ++i;
                continue;
            }
            const std::size_t c = r.pivot;
            known_[c] = 1;
            col_time_[c] = t_;
            --unknown_;
            const std::int64_t slot = (base + static_cast<std::int64_t>(c)) / K_ + 1;
            maybe_finish_slot(slot, decoded_at);
            rows_[i] = std::move(rows_.back());
            rows_.pop_back();
        }
        std::sort(rows_.begin(), rows_.end(), [](const Row& a, const Row& b) { return a.pivot < b.pivot; });
        retire(t_ - keep_);
    }

    std::int64_t slot() const { return t_; }
    // True when every symbol in the window is decoded.
    bool clean() const { return unknown_ == 0; }
    std::size_t rank() const { return rows_.size(); }

private:
    struct Row {
        std::size_t pivot;
        std::vector<Element> coeff;
    };

    std::int64_t base_col() const { return (base_slot_ - 1) * K_; }

    void maybe_finish_slot(std::int64_t slot, std::vector<std::int64_t>& decoded_at) {
        const std::size_t first = static_cast<std::size_t>((slot - base_slot_) * K_);
        std::int64_t latest = 0;
        for (int k = 0; k < K_; ++k) {
            if (!known_[first + k]) return;
            latest = std::max(latest, col_time_[first + k]);
        }
        if (slot < static_cast<std::int64_t>(decoded_at.size())) decoded_at[slot] = latest;
    }

    // Drops slots <= last.
    void retire(std::int64_t last) {
        if (last < base_slot_) return;
        const std::size_t cut = static_cast<std::size_t>((last - base_slot_ + 1) * K_);
        std::vector<Row> kept;
        for (auto& r : rows_) {
            if (r.pivot < cut) continue;
            r.coeff.erase(r.coeff.begin(), r.coeff.begin() + static_cast<std::ptrdiff_t>(cut));
            r.pivot -= cut;
            kept.push_back(std::move(r));
        }
        rows_.swap(kept);
        for (std::size_t c = 0; c < cut; ++c)
            if (!known_[c]) --unknown_;
        known_.erase(known_.begin(), known_.begin() + static_cast<std::ptrdiff_t>(cut));
        col_time_.erase(col_time_.begin(), col_time_.begin() + static_cast<std::ptrdiff_t>(cut));
        base_slot_ = last + 1;
    }

    const Field& f_;
    int K_;
    int keep_;
    std::int64_t t_ = 0;
    std::int64_t base_slot_ = 1;
    std::vector<Row> rows_;
    std::vector<std::uint8_t> known_;
    std::vector<std::int64_t> col_time_;
    std::int64_t unknown_ = 0;
};

} // namespace rlsc
