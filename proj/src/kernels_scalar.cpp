// Copyright 2026 The QAOASim Authors
// SPDX-License-Identifier: Apache-2.0

// Reference kernels. Plain loops, no intrinsics; the AVX2 variants are
// equivalence-tested against these.

#include <cmath>

#include "qaoasim/kernels.hpp"

namespace qaoa::kernels {

namespace {

void fwht_scalar(cplx* data, int n_qubits) {
    const std::size_t len = std::size_t{1} << n_qubits;
    for (std::size_t h = 1; h < len; h <<= 1) {
        for (std::size_t i = 0; i < len; i += h << 1) {
            for (std::size_t j = i; j < i + h; ++j) {
                const cplx x = data[j];
                const cplx y = data[j + h];
                data[j] = x + y;
                data[j + h] = x - y;
            }
        }
    }
    const double norm = std::pow(0.5, 0.5 * n_qubits);
    for (std::size_t i = 0; i < len; ++i) data[i] *= norm;
}

void phase_rotate_scalar(cplx* a, const double* diag, double theta, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) {
        const double t = -theta * diag[i];
        a[i] *= cplx(std::cos(t), std::sin(t));
    }
}

void diag_mul_scalar(cplx* a, const double* diag, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) a[i] *= diag[i];
}

void scale_scalar(cplx* a, double s, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) a[i] *= s;
}

void add_constant_scalar(cplx* a, cplx c, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) a[i] += c;
}

double norm_sq_scalar(const cplx* a, std::size_t len) {
    double s = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        s += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
    }
    return s;
}

cplx vec_sum_scalar(const cplx* a, std::size_t len) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        re += a[i].real();
        im += a[i].imag();
    }
    return {re, im};
}

double expectation_dot_scalar(const cplx* a, const double* w, std::size_t len) {
    double s = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        s += (a[i].real() * a[i].real() + a[i].imag() * a[i].imag()) * w[i];
    }
    return s;
}

cplx conj_dot_scalar(const cplx* l, const cplx* a, std::size_t len) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        re += l[i].real() * a[i].real() + l[i].imag() * a[i].imag();
        im += l[i].real() * a[i].imag() - l[i].imag() * a[i].real();
    }
    return {re, im};
}

cplx weighted_conj_dot_scalar(const cplx* l, const double* w, const cplx* a, std::size_t len) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        re += w[i] * (l[i].real() * a[i].real() + l[i].imag() * a[i].imag());
        im += w[i] * (l[i].real() * a[i].imag() - l[i].imag() * a[i].real());
    }
    return {re, im};
}

}  // namespace

namespace detail {

const KernelTable scalar_table = {
    fwht_scalar,     phase_rotate_scalar,   diag_mul_scalar, scale_scalar,
    add_constant_scalar, norm_sq_scalar,    vec_sum_scalar,  expectation_dot_scalar,
    conj_dot_scalar, weighted_conj_dot_scalar,
};

}  // namespace detail

}  // namespace qaoa::kernels
