// Copyright 2026 The QAOASim Authors
// SPDX-License-Identifier: Apache-2.0

#include "qaoasim/basis.hpp"

#include <algorithm>
#include <array>
#include <string>

namespace qaoa {

namespace {

constexpr int kMaxIterBits = 62;   // widest register the iterators handle
constexpr int kMaxFullBits = 30;   // widest materialized full space
constexpr std::uint64_t kMaxDim = 1ull << 30;

// Pascal's triangle up to n = 62; every entry fits in uint64_t.
struct BinomialTable {
    std::array<std::array<std::uint64_t, kMaxIterBits + 1>, kMaxIterBits + 1> c{};
    BinomialTable() {
        for (int n = 0; n <= kMaxIterBits; ++n) {
            c[n][0] = 1;
            for (int k = 1; k <= n; ++k) {
                c[n][k] = c[n - 1][k - 1] + (k <= n - 1 ? c[n - 1][k] : 0);
            }
        }
    }
};

const BinomialTable& table() {
    static const BinomialTable t;
    return t;
}

}  // namespace

std::uint64_t binomial(int n, int k) {
    if (n < 0 || n > kMaxIterBits) throw DomainError("binomial: n out of range [0, 62]");
    if (k < 0 || k > n) return 0;
    return table().c[n][k];
}

std::string to_bitstring(Bits x) {
    std::string s(static_cast<std::size_t>(x.n), '0');
    for (int i = 0; i < x.n; ++i) {
        if (x.test(i)) s[static_cast<std::size_t>(x.n - 1 - i)] = '1';
    }
    return s;
}

detail::BitstringRange states(int n) {
    if (n < 1 || n > kMaxFullBits) {
        throw CapacityError("states: n must be in [1, 30], got " + std::to_string(n));
    }
    return detail::BitstringRange(n, 0, 1ull << n, /*fixed_weight=*/false);
}

detail::BitstringRange dicke_states(int n, int k) {
    if (n < 1 || n > kMaxIterBits) {
        throw CapacityError("dicke_states: n must be in [1, 62], got " + std::to_string(n));
    }
    if (k < 0 || k > n) {
        throw DomainError("dicke_states: k must satisfy 0 <= k <= n, got k=" +
                          std::to_string(k) + " n=" + std::to_string(n));
    }
    return detail::BitstringRange(n, (1ull << k) - 1, binomial(n, k), /*fixed_weight=*/true);
}

std::uint64_t dicke_rank(std::uint64_t x, int n, int k) {
    if (n < 1 || n > kMaxIterBits || k < 0 || k > n) {
        throw DomainError("dicke_rank: bad n/k");
    }
    if (std::popcount(x) != k || (n < 64 && (x >> n) != 0)) {
        throw DomainError("dicke_rank: word is not an n-bit weight-k state");
    }
    // Combinadic: with set bits at positions p_1 < ... < p_k,
    // rank = sum_j C(p_j, j).
    std::uint64_t r = 0;
    int j = 1;
    std::uint64_t w = x;
    while (w) {
        const int pos = std::countr_zero(w);
        r += binomial(pos, j);
        ++j;
        w &= w - 1;
    }
    return r;
}

std::uint64_t dicke_unrank(std::uint64_t i, int n, int k) {
    if (n < 1 || n > kMaxIterBits || k < 0 || k > n) {
        throw DomainError("dicke_unrank: bad n/k");
    }
    if (i >= binomial(n, k)) {
        throw DomainError("dicke_unrank: index out of range");
    }
    std::uint64_t x = 0;
    std::uint64_t rem = i;
    int hi = n;
    for (int j = k; j >= 1; --j) {
        int pos = j - 1;
        for (int p = hi - 1; p >= j - 1; --p) {
            if (binomial(p, j) <= rem) {
                pos = p;
                break;
            }
        }
        rem -= binomial(pos, j);
        x |= 1ull << pos;
        hi = pos;
    }
    return x;
}

BasisSet BasisSet::full(int n) {
    if (n < 1 || n > kMaxFullBits) {
        throw CapacityError("BasisSet::full: n must be in [1, 30], got " + std::to_string(n));
    }
    BasisSet b;
    b.n_ = n;
    b.dim_ = 1ull << n;
    return b;
}

BasisSet BasisSet::dicke(int n, int k) {
    if (n < 1 || n > kMaxIterBits) {
        throw CapacityError("BasisSet::dicke: n must be in [1, 62]");
    }
    if (k < 0 || k > n) {
        throw DomainError("BasisSet::dicke: k must satisfy 0 <= k <= n");
    }
    const std::uint64_t d = binomial(n, k);
    if (d > kMaxDim) {
        throw CapacityError("BasisSet::dicke: C(n,k) exceeds the 2^30 capacity cap");
    }
    BasisSet b;
    b.n_ = n;
    b.k_ = k;
    b.dim_ = d;
    return b;
}

BasisSet BasisSet::explicit_list(int n, std::vector<std::uint64_t> states) {
    if (n < 1 || n > kMaxIterBits) {
        throw CapacityError("BasisSet::explicit_list: n must be in [1, 62]");
    }
    if (states.empty()) {
        throw DomainError("BasisSet::explicit_list: state list is empty");
    }
    if (states.size() > kMaxDim) {
        throw CapacityError("BasisSet::explicit_list: list exceeds the 2^30 capacity cap");
    }
    const std::uint64_t limit = (n == 64) ? ~0ull : ((1ull << n) - 1);
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (states[i] > limit) {
            throw DomainError("BasisSet::explicit_list: state exceeds n bits");
        }
        if (i > 0 && states[i] <= states[i - 1]) {
            throw DomainError("BasisSet::explicit_list: states must be strictly increasing");
        }
    }
    BasisSet b;
    b.n_ = n;
    b.dim_ = states.size();
    b.list_ = std::make_shared<const std::vector<std::uint64_t>>(std::move(states));
    return b;
}

std::uint64_t BasisSet::unrank(std::uint64_t i) const {
    if (i >= dim_) throw DomainError("BasisSet::unrank: index out of range");
    if (list_) return (*list_)[i];
    if (k_) return dicke_unrank(i, n_, *k_);
    return i;
}

std::uint64_t BasisSet::rank(std::uint64_t x) const {
    if (list_) {
        auto it = std::lower_bound(list_->begin(), list_->end(), x);
        if (it == list_->end() || *it != x) {
            throw DomainError("BasisSet::rank: state not in basis");
        }
        return static_cast<std::uint64_t>(it - list_->begin());
    }
    if (k_) return dicke_rank(x, n_, *k_);
    if (x >> n_) throw DomainError("BasisSet::rank: state exceeds n bits");
    return x;
}

bool BasisSet::operator==(const BasisSet& other) const {
    if (n_ != other.n_ || k_ != other.k_ || dim_ != other.dim_) return false;
    if (static_cast<bool>(list_) != static_cast<bool>(other.list_)) return false;
    if (list_ && list_ != other.list_ && *list_ != *other.list_) return false;
    return true;
}

}  // namespace qaoa
