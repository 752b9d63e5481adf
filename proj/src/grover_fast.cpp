// Copyright 2026 The QAOASim Authors
// SPDX-License-Identifier: Apache-2.0

#include "qaoasim/grover_fast.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qaoasim/errors.hpp"
#include "qaoasim/kernels.hpp"

namespace qaoa {

namespace {

// Values this close are one class: built-in objectives are integer-valued and
// unaffected; float objectives get deterministic binning.
constexpr double kCoalesceTol = 1e-12;
constexpr std::uint64_t kMaxStates = 1ull << 30;

std::uint64_t feasible_count(int n, std::optional<int> k) {
    if (k) {
        if (*k < 0 || *k > n) throw DomainError("hamming weight outside [0, n]");
        const std::uint64_t c = binomial(n, *k);  // validates n <= 62
        if (c > kMaxStates) {
            throw CapacityError("C(n,k) exceeds the 2^30 counting limit");
        }
        return c;
    }
    if (n < 1 || n > 30) throw CapacityError("unconstrained counting needs 1 <= n <= 30");
    return 1ull << n;
}

}  // namespace

double CompressedState::norm_sq() const {
    if (cost == nullptr) throw DomainError("compressed state has no cost attached");
    double total = 0.0;
    for (std::size_t j = 0; j < amps.size(); ++j) {
        total += static_cast<double>(cost->degeneracies[j]) * std::norm(amps[j]);
    }
    return total;
}

CompressedCost compress_cost(const CostFn& f, int n, std::optional<int> k, unsigned workers) {
    const std::uint64_t total = feasible_count(n, k);

    unsigned used = std::max(1u, workers);
    if (used > 1 && total < 2 * used) used = 1;

    // Per-worker exact-key histograms over disjoint index ranges, merged in
    // index order: the result cannot depend on scheduling or worker count.
    std::vector<std::map<double, std::uint64_t>> histograms(used);
    std::vector<std::optional<std::uint64_t>> bad(used);

    auto count_range = [&](unsigned w, std::uint64_t lo, std::uint64_t hi) {
        auto& hist = histograms[w];
        std::uint64_t word = (lo == hi) ? 0 : (k ? dicke_unrank(lo, n, *k) : lo);
        for (std::uint64_t i = lo; i < hi; ++i) {
            const double v = f(Bits{word, n});
            if (!std::isfinite(v)) {
                bad[w] = word;
                return;
            }
            ++hist[v];
            if (i + 1 < hi) word = k ? gosper_next(word) : word + 1;
        }
    };

    if (used == 1) {
        count_range(0, 0, total);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(used);
        const std::uint64_t chunk = (total + used - 1) / used;
        for (unsigned w = 0; w < used; ++w) {
            const std::uint64_t lo = chunk * w;
            const std::uint64_t hi = std::min(total, lo + chunk);
            pool.emplace_back([&, w, lo, hi] { count_range(w, lo, hi); });
        }
        for (auto& t : pool) t.join();
    }

    for (unsigned w = 0; w < used; ++w) {
        if (bad[w]) {
            throw DataError("objective returned a non-finite value at state " +
                            to_bitstring(Bits{*bad[w], n}));
        }
    }

    std::map<double, std::uint64_t> merged = std::move(histograms[0]);
    for (unsigned w = 1; w < used; ++w) {
        for (const auto& [value, count] : histograms[w]) merged[value] += count;
    }

    CompressedCost cc;
    cc.n = n;
    cc.k = k;
    cc.total = total;
    for (const auto& [value, count] : merged) {
        if (!cc.values.empty() && value - cc.values.back() <= kCoalesceTol) {
            cc.degeneracies.back() += count;
        } else {
            cc.values.push_back(value);
            cc.degeneracies.push_back(count);
        }
    }
    return cc;
}

CompressedState simulate_compressed(const std::vector<double>& betas,
                                    const std::vector<double>& gammas,
                                    const CompressedCost& cost) {
    if (betas.empty() || betas.size() != gammas.size()) {
        throw DomainError("betas and gammas must be non-empty and equal length");
    }
    for (std::size_t r = 0; r < betas.size(); ++r) {
        if (!std::isfinite(betas[r]) || !std::isfinite(gammas[r])) {
            throw DomainError("non-finite angle");
        }
    }
    if (cost.classes() == 0 || cost.total == 0) throw DomainError("empty compressed cost");

    const std::size_t m = cost.classes();
    CompressedState st;
    st.cost = &cost;
    st.amps.assign(m, 1.0 / std::sqrt(static_cast<double>(cost.total)));

    for (std::size_t r = 0; r < betas.size(); ++r) {
        kernels::phase_rotate(st.amps.data(), cost.values.data(), gammas[r], m);
        std::complex<double> s = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            s += static_cast<double>(cost.degeneracies[j]) * st.amps[j];
        }
        s /= static_cast<double>(cost.total);
        const std::complex<double> phase = std::polar(1.0, -betas[r]) - 1.0;
        kernels::add_constant(st.amps.data(), phase * s, m);
    }
    return st;
}

double exp_value_compressed(const CompressedState& st) {
    if (st.cost == nullptr) throw DomainError("compressed state has no cost attached");
    double total = 0.0;
    for (std::size_t j = 0; j < st.amps.size(); ++j) {
        total += static_cast<double>(st.cost->degeneracies[j]) * std::norm(st.amps[j]) *
                 st.cost->values[j];
    }
    return total;
}

double ground_state_probability_compressed(const CompressedState& st, Orientation orientation) {
    if (st.cost == nullptr) throw DomainError("compressed state has no cost attached");
    if (st.amps.empty()) throw DomainError("empty compressed state");
    const std::size_t j =
        orientation == Orientation::Maximize ? st.amps.size() - 1 : std::size_t{0};
    return static_cast<double>(st.cost->degeneracies[j]) * std::norm(st.amps[j]);
}

void save_histogram(const CompressedCost& cc, const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw DataError("cannot write histogram: " + path);
        out << "# n=" << cc.n << " k=";
        if (cc.k) {
            out << *cc.k;
        } else {
            out << "full";
        }
        out << " total=" << cc.total << "\n";
        char buf[64];
        for (std::size_t j = 0; j < cc.values.size(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", cc.values[j]);
            out << buf << "\t" << cc.degeneracies[j] << "\n";
        }
        out.close();
        if (!out) throw DataError("cannot write histogram: " + path);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw DataError("cannot move histogram into place: " + path);
    }
}

CompressedCost load_histogram(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open histogram: " + path);

    std::string header;
    if (!std::getline(in, header)) throw FormatError(path + ": empty histogram file");
    int n = 0;
    std::uint64_t total = 0;
    std::string k_tok;
    {
        std::istringstream ss(header);
        std::string hash, n_field, k_field, total_field;
        ss >> hash >> n_field >> k_field >> total_field;
        if (hash != "#" || n_field.rfind("n=", 0) != 0 || k_field.rfind("k=", 0) != 0 ||
            total_field.rfind("total=", 0) != 0 || !ss.eof()) {
            throw FormatError(path + ":1: expected '# n=<n> k=<k|full> total=<total>'");
        }
        n = std::atoi(n_field.c_str() + 2);
        k_tok = k_field.substr(2);
        total = std::strtoull(total_field.c_str() + 6, nullptr, 10);
    }

    CompressedCost cc;
    cc.n = n;
    if (k_tok != "full") {
        char* end = nullptr;
        const long k = std::strtol(k_tok.c_str(), &end, 10);
        if (end != k_tok.c_str() + k_tok.size() || k_tok.empty()) {
            throw FormatError(path + ":1: bad k field '" + k_tok + "'");
        }
        cc.k = static_cast<int>(k);
    }
    cc.total = total;

    const std::uint64_t expected =
        cc.k ? binomial(n, *cc.k) : ((n >= 1 && n <= 62) ? (1ull << n) : 0);
    if (expected == 0 || expected != total) {
        throw FormatError(path + ":1: total does not match the declared basis");
    }

    std::string line;
    std::size_t line_no = 1;
    std::uint64_t counted = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos) {
            throw FormatError(path + ":" + std::to_string(line_no) +
                              ": expected <value>\\t<degeneracy>");
        }
        const std::string v_tok = line.substr(0, tab);
        const std::string d_tok = line.substr(tab + 1);
        char* end = nullptr;
        const double value = std::strtod(v_tok.c_str(), &end);
        if (end != v_tok.c_str() + v_tok.size() || v_tok.empty() || !std::isfinite(value)) {
            throw FormatError(path + ":" + std::to_string(line_no) + ": bad value '" + v_tok +
                              "'");
        }
        const std::uint64_t deg = std::strtoull(d_tok.c_str(), &end, 10);
        if (end != d_tok.c_str() + d_tok.size() || d_tok.empty() || deg == 0) {
            throw FormatError(path + ":" + std::to_string(line_no) + ": bad degeneracy '" +
                              d_tok + "'");
        }
        if (!cc.values.empty() && value <= cc.values.back()) {
            throw FormatError(path + ":" + std::to_string(line_no) +
                              ": values must be strictly increasing");
        }
        cc.values.push_back(value);
        cc.degeneracies.push_back(deg);
        counted += deg;
    }
    if (cc.values.empty()) throw FormatError(path + ": histogram has no classes");
    if (counted != total) {
        throw FormatError(path + ": degeneracies sum to " + std::to_string(counted) +
                          " but the header declares " + std::to_string(total));
    }
    return cc;
}

}  // namespace qaoa
