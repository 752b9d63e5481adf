// Copyright 2026 The QAOASim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>

namespace qaoa::kernels {

/// The elementwise / butterfly / reduction inner loops of the simulator.
/// Each kernel has a scalar reference implementation and an AVX2+FMA variant;
/// the active set is chosen once at startup from CPU features. set_backend
/// exists so tests can force either path and check they agree.

enum class Backend { Auto, Scalar, Avx2 };

/// Force a backend. Auto re-detects. Throws DomainError if the requested
/// backend is not supported on this CPU.
void set_backend(Backend b);
Backend active_backend();
const char* backend_name();
bool avx2_supported();

using cplx = std::complex<double>;

/// In-place normalized Walsh-Hadamard transform H^{(x)n} over 2^n amplitudes.
void fwht(cplx* data, int n_qubits);

/// a[i] *= exp(-i * theta * diag[i])
void phase_rotate(cplx* a, const double* diag, double theta, std::size_t len);

/// a[i] *= diag[i]
void diag_mul(cplx* a, const double* diag, std::size_t len);

/// a[i] *= s
void scale(cplx* a, double s, std::size_t len);

/// a[i] += c
void add_constant(cplx* a, cplx c, std::size_t len);

/// sum_i |a[i]|^2
double norm_sq(const cplx* a, std::size_t len);

/// sum_i a[i]
cplx vec_sum(const cplx* a, std::size_t len);

/// sum_i |a[i]|^2 * w[i]
double expectation_dot(const cplx* a, const double* w, std::size_t len);

/// sum_i conj(l[i]) * a[i]
cplx conj_dot(const cplx* l, const cplx* a, std::size_t len);

/// sum_i conj(l[i]) * w[i] * a[i]
cplx weighted_conj_dot(const cplx* l, const double* w, const cplx* a, std::size_t len);

namespace detail {

struct KernelTable {
    void (*fwht)(cplx*, int);
    void (*phase_rotate)(cplx*, const double*, double, std::size_t);
    void (*diag_mul)(cplx*, const double*, std::size_t);
    void (*scale)(cplx*, double, std::size_t);
    void (*add_constant)(cplx*, cplx, std::size_t);
    double (*norm_sq)(const cplx*, std::size_t);
    cplx (*vec_sum)(const cplx*, std::size_t);
    double (*expectation_dot)(const cplx*, const double*, std::size_t);
    cplx (*conj_dot)(const cplx*, const cplx*, std::size_t);
    cplx (*weighted_conj_dot)(const cplx*, const double*, const cplx*, std::size_t);
};

extern const KernelTable scalar_table;
// Null entries when the build target has no AVX2 code path.
const KernelTable* avx2_table();

}  // namespace detail

}  // namespace qaoa::kernels
