// Copyright 2026 The QAOASim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <cstdint>
#include <iterator>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qaoasim/errors.hpp"

namespace qaoa {

/// A computational basis state: the integer word plus the register width.
/// Bit i of the word is qubit i, so qubit 0 is the least significant bit.
struct Bits {
    std::uint64_t word = 0;
    int n = 0;

    constexpr bool test(int i) const noexcept { return (word >> i) & 1u; }
    constexpr int popcount() const noexcept { return std::popcount(word); }

    /// 0/1 array view, index i = qubit i.
    std::vector<int> to_array() const {
        std::vector<int> a(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i)] = test(i) ? 1 : 0;
        return a;
    }
};

/// "0100..." rendering, qubit n-1 leftmost.
std::string to_bitstring(Bits x);

/// Next larger integer with the same popcount (Gosper's hack).
/// Requires x > 0; wrap past the top n-bit word is the caller's concern.
constexpr std::uint64_t gosper_next(std::uint64_t x) noexcept {
    const std::uint64_t u = x & (~x + 1);
    const std::uint64_t v = x + u;
    return v | (((x ^ v) / u) >> 2);
}

/// Binomial coefficient C(n, k) for n <= 62 (all values fit in uint64_t).
std::uint64_t binomial(int n, int k);

namespace detail {

/// Forward range over bitstrings of fixed width, either all words in
/// increasing order or only the weight-k words via Gosper successor steps.
/// Iteration is count-bounded, so no wrap checks are needed.
class BitstringRange {
public:
    BitstringRange(int n, std::uint64_t first, std::uint64_t count, bool fixed_weight)
        : n_(n), first_(first), count_(count), fixed_weight_(fixed_weight) {}

    class iterator {
    public:
        using iterator_category = std::input_iterator_tag;
        using value_type = Bits;
        using difference_type = std::int64_t;

        iterator(int n, std::uint64_t word, std::uint64_t remaining, bool fixed_weight)
            : n_(n), word_(word), remaining_(remaining), fixed_weight_(fixed_weight) {}

        Bits operator*() const noexcept { return Bits{word_, n_}; }

        iterator& operator++() {
            --remaining_;
            if (remaining_ > 0) {
                word_ = fixed_weight_ ? gosper_next(word_) : word_ + 1;
            }
            return *this;
        }

        bool operator!=(const iterator& other) const noexcept {
            return remaining_ != other.remaining_;
        }
        bool operator==(const iterator& other) const noexcept {
            return remaining_ == other.remaining_;
        }

    private:
        int n_;
        std::uint64_t word_;
        std::uint64_t remaining_;
        bool fixed_weight_;
    };

    iterator begin() const { return iterator(n_, first_, count_, fixed_weight_); }
    iterator end() const { return iterator(n_, 0, 0, fixed_weight_); }
    std::uint64_t size() const noexcept { return count_; }

private:
    int n_;
    std::uint64_t first_;
    std::uint64_t count_;
    bool fixed_weight_;
};

}  // namespace detail

/// All 2^n bitstrings in increasing integer order. 1 <= n <= 30.
detail::BitstringRange states(int n);

/// All C(n,k) weight-k bitstrings in increasing integer order, starting at
/// 2^k - 1 and stepping with Gosper's hack. 0 <= k <= n <= 62.
detail::BitstringRange dicke_states(int n, int k);

/// Index of a weight-k word within the dicke_states(n, k) ordering.
std::uint64_t dicke_rank(std::uint64_t x, int n, int k);

/// Inverse of dicke_rank.
std::uint64_t dicke_unrank(std::uint64_t i, int n, int k);

/// Enumeration of the feasible states a simulation runs over: the full
/// n-qubit space, a Hamming-weight-k (Dicke) subspace, or an explicit list.
/// Materialized consumers (state vectors, cost tables, mixers) size their
/// arrays to dim(), so construction caps dim at 2^30.
class BasisSet {
public:
    /// Empty placeholder (dim 0); assign a factory result before use.
    BasisSet() = default;

    static BasisSet full(int n);
    static BasisSet dicke(int n, int k);

    /// Extension point for arbitrary feasible sets: states must be strictly
    /// increasing n-bit words. Rank is by binary search.
    static BasisSet explicit_list(int n, std::vector<std::uint64_t> states);

    int n() const noexcept { return n_; }
    std::uint64_t dim() const noexcept { return dim_; }
    bool unconstrained() const noexcept { return !k_.has_value() && !list_; }
    std::optional<int> hamming_weight() const noexcept { return k_; }
    bool is_explicit() const noexcept { return list_ != nullptr; }

    std::uint64_t unrank(std::uint64_t i) const;
    std::uint64_t rank(std::uint64_t x) const;
    Bits state(std::uint64_t i) const { return Bits{unrank(i), n_}; }

    /// Non-null only for explicit-list bases.
    const std::vector<std::uint64_t>* explicit_states() const noexcept { return list_.get(); }

    bool operator==(const BasisSet& other) const;
    bool operator!=(const BasisSet& other) const { return !(*this == other); }

private:
    int n_ = 0;
    std::optional<int> k_;
    std::uint64_t dim_ = 0;
    std::shared_ptr<const std::vector<std::uint64_t>> list_;
};

}  // namespace qaoa
