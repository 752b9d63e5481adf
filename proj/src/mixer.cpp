// Copyright 2026 The QAOASim Authors
// SPDX-License-Identifier: Apache-2.0

#include "qaoasim/mixer.hpp"

#include <zlib.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "qaoasim/errors.hpp"

namespace qaoa {

namespace {

// Dense eigendecompositions get expensive and memory-hungry past this.
constexpr std::uint64_t kMaxEigenDim = 4096;
constexpr std::uint32_t kUnconstrained = 0xFFFFFFFFu;
constexpr std::uint16_t kCacheVersion = 1;

void check_eigen_dim(std::uint64_t dim) {
    if (dim > kMaxEigenDim) {
        throw CapacityError("dense mixer dimension " + std::to_string(dim) + " exceeds the " +
                            std::to_string(kMaxEigenDim) + " limit");
    }
}

Mixer eigendecompose_real(const ::Eigen::MatrixXd& h, BasisSet basis, MixerKind kind) {
    ::Eigen::SelfAdjointEigenSolver<::Eigen::MatrixXd> es(h);
    if (es.info() != ::Eigen::Success) throw Error("eigendecomposition did not converge");
    Mixer m;
    m.kind = kind;
    m.basis = std::move(basis);
    m.real_vectors = true;
    m.v_real = es.eigenvectors();
    m.eigenvalues = es.eigenvalues();
    return m;
}

// Weight-k subspace matrix of sum over `pairs` of X_i X_j + Y_i Y_j: entry 2
// between states differing by one (1,0) transposition at a listed pair.
::Eigen::MatrixXd xxyy_subspace_matrix(int n, int k,
                                       const std::vector<std::pair<int, int>>& pairs) {
    const std::uint64_t dim = binomial(n, k);
    check_eigen_dim(dim);
    ::Eigen::MatrixXd h = ::Eigen::MatrixXd::Zero(static_cast<::Eigen::Index>(dim),
                                                  static_cast<::Eigen::Index>(dim));
    std::uint64_t col = 0;
    for (Bits x : dicke_states(n, k)) {
        for (const auto& [u, v] : pairs) {
            if (x.test(u) == x.test(v)) continue;
            const std::uint64_t y = x.word ^ ((1ull << u) | (1ull << v));
            const std::uint64_t row = dicke_rank(y, n, k);
            h(static_cast<::Eigen::Index>(row), static_cast<::Eigen::Index>(col)) += 2.0;
        }
        ++col;
    }
    return h;
}

}  // namespace

Mixer mixer_x(const std::vector<int>& term_orders, int n) {
    BasisSet basis = BasisSet::full(n);
    for (int r : term_orders) {
        if (r < 1 || r > n) {
            throw DomainError("term order " + std::to_string(r) + " outside [1, " +
                              std::to_string(n) + "]");
        }
    }

    // zdiag[x] depends only on popcount(x): it is a sum of elementary
    // symmetric polynomials in the per-qubit Z eigenvalues, of which
    // n - popcount are +1 and popcount are -1. Coefficients of
    // (1+t)^(n-m) (1-t)^m give e_r for popcount class m.
    std::vector<double> class_value(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> c(static_cast<std::size_t>(n) + 1);
    for (int m = 0; m <= n; ++m) {
        std::fill(c.begin(), c.end(), 0.0);
        c[0] = 1.0;
        int deg = 0;
        for (int i = 0; i < n - m; ++i) {
            ++deg;
            for (int d = deg; d >= 1; --d) c[d] += c[d - 1];
        }
        for (int i = 0; i < m; ++i) {
            ++deg;
            for (int d = deg; d >= 1; --d) c[d] -= c[d - 1];
        }
        double val = 0.0;
        for (int r : term_orders) val += c[static_cast<std::size_t>(r)];
        class_value[static_cast<std::size_t>(m)] = val;
    }

    Mixer m;
    m.kind = MixerKind::XDiagonal;
    m.basis = std::move(basis);
    m.zdiag.resize(std::size_t{1} << n);
    for (std::uint64_t x = 0; x < m.zdiag.size(); ++x) {
        m.zdiag[x] = class_value[static_cast<std::size_t>(std::popcount(x))];
    }
    return m;
}

Mixer mixer_x_terms(const std::vector<XTerm>& terms, int n) {
    BasisSet basis = BasisSet::full(n);
    std::vector<std::uint64_t> masks;
    masks.reserve(terms.size());
    for (const auto& term : terms) {
        if (term.qubits.empty()) throw DomainError("empty qubit subset in mixer term");
        if (!std::isfinite(term.coeff)) throw DomainError("non-finite mixer term coefficient");
        std::uint64_t mask = 0;
        for (int q : term.qubits) {
            if (q < 0 || q >= n) {
                throw DomainError("qubit index " + std::to_string(q) + " outside [0, " +
                                  std::to_string(n) + ")");
            }
            const std::uint64_t bit = 1ull << q;
            if (mask & bit) throw DomainError("repeated qubit index in mixer term");
            mask |= bit;
        }
        masks.push_back(mask);
    }

    Mixer m;
    m.kind = MixerKind::XDiagonal;
    m.basis = std::move(basis);
    m.zdiag.assign(std::size_t{1} << n, 0.0);
    for (std::uint64_t x = 0; x < m.zdiag.size(); ++x) {
        double v = 0.0;
        for (std::size_t t = 0; t < masks.size(); ++t) {
            const int parity = std::popcount(x & masks[t]) & 1;
            v += parity ? -terms[t].coeff : terms[t].coeff;
        }
        m.zdiag[x] = v;
    }
    return m;
}

Mixer mixer_clique(int n, int k, const std::optional<std::string>& cache_path) {
    if (k < 1 || k > n - 1) {
        throw DomainError("clique mixer requires 1 <= k <= n-1");
    }
    if (cache_path && std::filesystem::exists(*cache_path)) {
        return load_mixer_checked(*cache_path, BasisSet::dicke(n, k));
    }
    std::vector<std::pair<int, int>> pairs;
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
    }
    Mixer m = eigendecompose_real(xxyy_subspace_matrix(n, k, pairs), BasisSet::dicke(n, k),
                                  MixerKind::Eigen);
    if (cache_path) save_mixer(m, *cache_path);
    return m;
}

Mixer mixer_ring(int n, int k, const std::optional<std::string>& cache_path, bool closed) {
    if (n < 3) throw DomainError("ring mixer requires n >= 3");
    if (k < 1 || k > n - 1) {
        throw DomainError("ring mixer requires 1 <= k <= n-1");
    }
    if (cache_path && std::filesystem::exists(*cache_path)) {
        return load_mixer_checked(*cache_path, BasisSet::dicke(n, k));
    }
    std::vector<std::pair<int, int>> pairs;
    for (int u = 0; u + 1 < n; ++u) pairs.emplace_back(u, u + 1);
    if (closed) pairs.emplace_back(n - 1, 0);
    Mixer m = eigendecompose_real(xxyy_subspace_matrix(n, k, pairs), BasisSet::dicke(n, k),
                                  MixerKind::Eigen);
    if (cache_path) save_mixer(m, *cache_path);
    return m;
}

Mixer mixer_grover(const BasisSet& basis) {
    Mixer m;
    m.kind = MixerKind::Grover;
    m.basis = basis;
    return m;
}

Mixer mixer_custom(const ::Eigen::MatrixXcd& hamiltonian, const BasisSet& basis) {
    const auto dim = static_cast<::Eigen::Index>(basis.dim());
    if (hamiltonian.rows() != dim || hamiltonian.cols() != dim) {
        throw DomainError("custom mixer matrix is " + std::to_string(hamiltonian.rows()) + "x" +
                          std::to_string(hamiltonian.cols()) + " but the basis has dimension " +
                          std::to_string(basis.dim()));
    }
    check_eigen_dim(basis.dim());
    const double asym = (hamiltonian - hamiltonian.adjoint()).cwiseAbs().maxCoeff();
    if (!(asym <= 1e-10)) {
        throw DomainError("custom mixer matrix is not Hermitian (max |H - H^dagger| = " +
                          std::to_string(asym) + ")");
    }

    if (hamiltonian.imag().cwiseAbs().maxCoeff() == 0.0) {
        return eigendecompose_real(hamiltonian.real(), basis, MixerKind::CustomEigen);
    }
    ::Eigen::SelfAdjointEigenSolver<::Eigen::MatrixXcd> es(hamiltonian);
    if (es.info() != ::Eigen::Success) throw Error("eigendecomposition did not converge");
    Mixer m;
    m.kind = MixerKind::CustomEigen;
    m.basis = basis;
    m.real_vectors = false;
    m.v_cplx = es.eigenvectors();
    m.eigenvalues = es.eigenvalues();
    return m;
}

::Eigen::MatrixXcd reconstruct_hamiltonian(const Mixer& m) {
    switch (m.kind) {
        case MixerKind::Eigen:
        case MixerKind::CustomEigen:
            if (m.real_vectors) {
                ::Eigen::MatrixXd h =
                    m.v_real * m.eigenvalues.asDiagonal() * m.v_real.transpose();
                return h.cast<std::complex<double>>();
            }
            return m.v_cplx * m.eigenvalues.asDiagonal() * m.v_cplx.adjoint();
        case MixerKind::Grover: {
            const auto dim = static_cast<::Eigen::Index>(m.basis.dim());
            return ::Eigen::MatrixXcd::Constant(dim, dim, 1.0 / static_cast<double>(m.basis.dim()));
        }
        case MixerKind::XDiagonal:
            break;
    }
    throw DomainError("no dense reconstruction for diagonal-form mixers");
}

namespace {

struct CrcWriter {
    std::ofstream out;
    uLong crc = crc32(0L, Z_NULL, 0);

    explicit CrcWriter(const std::string& path) : out(path, std::ios::binary) {}

    void put(const void* p, std::size_t len) {
        out.write(static_cast<const char*>(p), static_cast<std::streamsize>(len));
        crc = crc32(crc, static_cast<const Bytef*>(p), static_cast<uInt>(len));
    }
    template <typename T>
    void put_value(T v) {
        put(&v, sizeof v);
    }
};

struct CrcReader {
    std::ifstream in;
    uLong crc = crc32(0L, Z_NULL, 0);
    const std::string& path;

    CrcReader(const std::string& p) : in(p, std::ios::binary), path(p) {}

    void get(void* p, std::size_t len) {
        in.read(static_cast<char*>(p), static_cast<std::streamsize>(len));
        if (static_cast<std::size_t>(in.gcount()) != len) {
            throw FormatError(path + ": truncated mixer cache");
        }
        crc = crc32(crc, static_cast<const Bytef*>(p), static_cast<uInt>(len));
    }
    template <typename T>
    T get_value() {
        T v;
        get(&v, sizeof v);
        return v;
    }
};

}  // namespace

void save_mixer(const Mixer& m, const std::string& path) {
    if (m.kind != MixerKind::Eigen && m.kind != MixerKind::CustomEigen) {
        throw DomainError("only eigendecomposed mixers are cached");
    }
    if (m.basis.is_explicit()) {
        throw DomainError("mixers over explicit state lists cannot be cached");
    }

    const std::uint64_t dim = m.basis.dim();
    const std::string tmp = path + ".tmp";
    CrcWriter w(tmp);
    if (!w.out) throw DataError("cannot write mixer cache: " + path);

    w.put("QMIX", 4);
    w.put_value<std::uint16_t>(kCacheVersion);
    w.put_value<std::uint8_t>(static_cast<std::uint8_t>(m.kind));
    w.put_value<std::uint32_t>(static_cast<std::uint32_t>(m.basis.n()));
    const auto k = m.basis.hamming_weight();
    w.put_value<std::uint32_t>(k ? static_cast<std::uint32_t>(*k) : kUnconstrained);
    w.put_value<std::uint64_t>(dim);

    w.put(m.eigenvalues.data(), dim * sizeof(double));

    std::vector<double> row(2 * dim);
    for (std::uint64_t r = 0; r < dim; ++r) {
        for (std::uint64_t c = 0; c < dim; ++c) {
            const auto ri = static_cast<::Eigen::Index>(r);
            const auto ci = static_cast<::Eigen::Index>(c);
            const std::complex<double> v =
                m.real_vectors ? std::complex<double>(m.v_real(ri, ci), 0.0) : m.v_cplx(ri, ci);
            row[2 * c] = v.real();
            row[2 * c + 1] = v.imag();
        }
        w.put(row.data(), row.size() * sizeof(double));
    }

    const auto crc = static_cast<std::uint32_t>(w.crc);
    w.out.write(reinterpret_cast<const char*>(&crc), sizeof crc);
    w.out.close();
    if (!w.out) throw DataError("cannot write mixer cache: " + path);

    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw DataError("cannot move mixer cache into place: " + path);
    }
}

Mixer load_mixer(const std::string& path) {
    CrcReader r(path);
    if (!r.in) throw DataError("cannot open mixer cache: " + path);

    char magic[4];
    r.get(magic, 4);
    if (std::memcmp(magic, "QMIX", 4) != 0) {
        throw FormatError(path + ": not a mixer cache (bad magic)");
    }
    const auto version = r.get_value<std::uint16_t>();
    if (version != kCacheVersion) {
        throw FormatError(path + ": unsupported mixer cache version " + std::to_string(version));
    }
    const auto kind_byte = r.get_value<std::uint8_t>();
    if (kind_byte != static_cast<std::uint8_t>(MixerKind::Eigen) &&
        kind_byte != static_cast<std::uint8_t>(MixerKind::CustomEigen)) {
        throw FormatError(path + ": mixer cache holds a non-eigendecomposed kind");
    }
    const auto n = r.get_value<std::uint32_t>();
    const auto k = r.get_value<std::uint32_t>();
    const auto dim = r.get_value<std::uint64_t>();

    BasisSet basis;
    try {
        basis = (k == kUnconstrained) ? BasisSet::full(static_cast<int>(n))
                                      : BasisSet::dicke(static_cast<int>(n), static_cast<int>(k));
    } catch (const Error& e) {
        throw FormatError(path + ": invalid basis fields: " + e.what());
    }
    if (basis.dim() != dim) {
        throw FormatError(path + ": dimension field " + std::to_string(dim) +
                          " does not match the declared basis (dim " +
                          std::to_string(basis.dim()) + ")");
    }
    check_eigen_dim(dim);

    Mixer m;
    m.kind = static_cast<MixerKind>(kind_byte);
    m.basis = std::move(basis);
    m.eigenvalues.resize(static_cast<::Eigen::Index>(dim));
    r.get(m.eigenvalues.data(), dim * sizeof(double));

    ::Eigen::MatrixXcd v(static_cast<::Eigen::Index>(dim), static_cast<::Eigen::Index>(dim));
    std::vector<double> row(2 * dim);
    bool all_real = true;
    for (std::uint64_t i = 0; i < dim; ++i) {
        r.get(row.data(), row.size() * sizeof(double));
        for (std::uint64_t c = 0; c < dim; ++c) {
            const double re = row[2 * c];
            const double im = row[2 * c + 1];
            all_real = all_real && im == 0.0;
            v(static_cast<::Eigen::Index>(i), static_cast<::Eigen::Index>(c)) = {re, im};
        }
    }

    const auto expect = static_cast<std::uint32_t>(r.crc);
    std::uint32_t stored;
    r.in.read(reinterpret_cast<char*>(&stored), sizeof stored);
    if (static_cast<std::size_t>(r.in.gcount()) != sizeof stored) {
        throw FormatError(path + ": truncated mixer cache");
    }
    if (stored != expect) throw FormatError(path + ": mixer cache checksum mismatch");
    if (r.in.peek() != std::ifstream::traits_type::eof()) {
        throw FormatError(path + ": trailing bytes after mixer cache");
    }

    if (all_real) {
        m.real_vectors = true;
        m.v_real = v.real();
    } else {
        m.real_vectors = false;
        m.v_cplx = std::move(v);
    }
    return m;
}

Mixer load_mixer_checked(const std::string& path, const BasisSet& expected_basis) {
    Mixer m = load_mixer(path);
    if (m.basis != expected_basis) {
        throw CompatibilityError(path + ": mixer cache was built for a different basis (n=" +
                                 std::to_string(m.basis.n()) + ", dim=" +
                                 std::to_string(m.basis.dim()) + ")");
    }
    return m;
}

}  // namespace qaoa
