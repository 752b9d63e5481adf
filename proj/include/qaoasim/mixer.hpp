// Copyright 2026 The QAOASim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "qaoasim/basis.hpp"

namespace qaoa {

enum class MixerKind : std::uint8_t {
    XDiagonal = 0,    // sum of Pauli-X products, held as a Z-basis diagonal
    Eigen = 1,        // Hermitian eigendecomposition (clique / ring)
    Grover = 2,       // rank-1 projector onto the uniform feasible state
    CustomEigen = 3,  // eigendecomposition of a user-supplied Hermitian
};

/// A mixer Hamiltonian in the form the simulator consumes directly.
///
/// XDiagonal mixers store f(Z) eigenvalues over the full space and evolve
/// through a Hadamard sandwich. Eigen kinds store H_M = V diag(D) V^dagger
/// restricted to the feasible subspace; V is kept real when the Hamiltonian
/// is real symmetric. Grover mixers store nothing: the evolution is applied
/// analytically.
struct Mixer {
    MixerKind kind = MixerKind::Grover;
    BasisSet basis;

    // XDiagonal
    std::vector<double> zdiag;

    // Eigen / CustomEigen
    bool real_vectors = false;
    ::Eigen::MatrixXd v_real;
    ::Eigen::MatrixXcd v_cplx;
    ::Eigen::VectorXd eigenvalues;
};

/// f(X) = sum over r in term_orders of sum over r-subsets S of prod_{i in S} X_i.
/// The Z-basis diagonal is evaluated with elementary-symmetric-polynomial
/// recurrences per popcount class, never by subset enumeration.
Mixer mixer_x(const std::vector<int>& term_orders, int n);

/// One weighted Pauli-X product per term: subsets of qubit indices with real
/// coefficients.
struct XTerm {
    std::vector<int> qubits;
    double coeff = 1.0;
};
Mixer mixer_x_terms(const std::vector<XTerm>& terms, int n);

/// sum_{i<j} X_i X_j + Y_i Y_j on the weight-k subspace, eigendecomposed.
/// If cache_path is given and exists the decomposition is loaded instead of
/// recomputed; otherwise it is computed and saved there.
Mixer mixer_clique(int n, int k, const std::optional<std::string>& cache_path = {});

/// XX+YY on ring-adjacent pairs (i, i+1) plus the wrap-around pair (n-1, 0).
/// Set closed=false for the open chain.
Mixer mixer_ring(int n, int k, const std::optional<std::string>& cache_path = {},
                 bool closed = true);

/// |psi_0><psi_0| over the given feasible set.
Mixer mixer_grover(const BasisSet& basis);

/// Eigendecomposition of an arbitrary Hermitian matrix over the basis.
Mixer mixer_custom(const ::Eigen::MatrixXcd& hamiltonian, const BasisSet& basis);

/// Dense reconstruction for test support: V diag(D) V^dagger for Eigen kinds,
/// the rank-1 uniform projector for Grover. XDiagonal is rejected.
::Eigen::MatrixXcd reconstruct_hamiltonian(const Mixer& m);

/// Binary cache for Eigen/CustomEigen mixers. Little-endian: magic "QMIX",
/// u16 version=1, u8 kind, u32 n, u32 k (0xFFFFFFFF = unconstrained),
/// u64 dim, D as dim float64, V as dim^2 complex128 (row-major, re then im),
/// trailing CRC32 over all preceding bytes.
void save_mixer(const Mixer& m, const std::string& path);
Mixer load_mixer(const std::string& path);

/// load_mixer plus an n/k/kind check against the requesting context.
Mixer load_mixer_checked(const std::string& path, const BasisSet& expected_basis);

}  // namespace qaoa
