#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace roughconv {

// Subset of [0, N) as a bit vector. N is the evaluation horizon; all set
// algebra requires matching horizons.
class IndexSet {
public:
    explicit IndexSet(std::size_t horizon) : horizon_(horizon), bits_((horizon + 63) / 64, 0) {
        if (horizon == 0) throw std::invalid_argument("horizon must be >= 1");
    }

    std::size_t horizon() const { return horizon_; }

    bool contains(std::size_t i) const {
        return i < horizon_ && (bits_[i >> 6] >> (i & 63)) & 1u;
    }

    void set(std::size_t i) {
        check_index(i);
        bits_[i >> 6] |= std::uint64_t{1} << (i & 63);
    }

    void reset(std::size_t i) {
        check_index(i);
        bits_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : bits_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    bool empty() const {
        for (auto w : bits_)
            if (w) return false;
        return true;
    }

    // |S ∩ [0, end)|
    std::size_t count_below(std::size_t end) const {
        if (end > horizon_) throw std::out_of_range("window beyond horizon");
        std::size_t full = end >> 6, c = 0;
        for (std::size_t w = 0; w < full; ++w) c += static_cast<std::size_t>(std::popcount(bits_[w]));
        std::size_t rem = end & 63;
        if (rem) c += static_cast<std::size_t>(std::popcount(bits_[full] & ((std::uint64_t{1} << rem) - 1)));
        return c;
    }

    std::size_t count_between(std::size_t lo, std::size_t hi) const {
        if (lo > hi) throw std::invalid_argument("bad range");
        return count_below(hi) - count_below(lo);
    }

    bool any_between(std::size_t lo, std::size_t hi) const { return count_between(lo, hi) > 0; }

    IndexSet complemented() const {
        IndexSet r(horizon_);
        for (std::size_t w = 0; w < bits_.size(); ++w) r.bits_[w] = ~bits_[w];
        r.trim();
        return r;
    }

    IndexSet operator|(const IndexSet& o) const {
        check_horizon(o);
        IndexSet r(horizon_);
        for (std::size_t w = 0; w < bits_.size(); ++w) r.bits_[w] = bits_[w] | o.bits_[w];
        return r;
    }

    IndexSet operator&(const IndexSet& o) const {
        check_horizon(o);
        IndexSet r(horizon_);
        for (std::size_t w = 0; w < bits_.size(); ++w) r.bits_[w] = bits_[w] & o.bits_[w];
        return r;
    }

    bool is_subset_of(const IndexSet& o) const {
        check_horizon(o);
        for (std::size_t w = 0; w < bits_.size(); ++w)
            if (bits_[w] & ~o.bits_[w]) return false;
        return true;
    }

    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t w = 0; w < bits_.size(); ++w) {
            std::uint64_t word = bits_[w];
            while (word) {
                unsigned b = static_cast<unsigned>(std::countr_zero(word));
                fn(w * 64 + b);
                word &= word - 1;
            }
        }
    }

    std::vector<std::size_t> to_indices() const {
        std::vector<std::size_t> out;
        out.reserve(count());
        for_each([&](std::size_t i) { out.push_back(i); });
        return out;
    }

    static IndexSet empty_set(std::size_t n) { return IndexSet(n); }

    static IndexSet full_set(std::size_t n) {
        IndexSet s(n);
        for (auto& w : s.bits_) w = ~std::uint64_t{0};
        s.trim();
        return s;
    }

    static IndexSet evens(std::size_t n) {
        IndexSet s(n);
        for (std::size_t i = 0; i < n; i += 2) s.set(i);
        return s;
    }

    static IndexSet odds(std::size_t n) { return evens(n).complemented(); }

    static IndexSet squares(std::size_t n) {
        IndexSet s(n);
        for (std::size_t k = 0; k * k < n; ++k) s.set(k * k);
        return s;
    }

    static IndexSet of(std::size_t n, std::initializer_list<std::size_t> idx) {
        IndexSet s(n);
        for (auto i : idx) s.set(i);
        return s;
    }

    static IndexSet range(std::size_t n, std::size_t lo, std::size_t hi) {
        IndexSet s(n);
        for (std::size_t i = lo; i < hi; ++i) s.set(i);
        return s;
    }

    bool operator==(const IndexSet& o) const { return horizon_ == o.horizon_ && bits_ == o.bits_; }

private:
    void check_index(std::size_t i) const {
        if (i >= horizon_) throw std::out_of_range("index beyond horizon");
    }
    void check_horizon(const IndexSet& o) const {
        if (horizon_ != o.horizon_) throw std::invalid_argument("horizon mismatch");
    }
    void trim() {
        std::size_t rem = horizon_ & 63;
        if (rem) bits_.back() &= (std::uint64_t{1} << rem) - 1;
    }

    std::size_t horizon_;
    std::vector<std::uint64_t> bits_;
};

}  // namespace roughconv
