// Copyright 2026 The QAOASim Authors
// SPDX-License-Identifier: Apache-2.0

#include "qaoasim/kernels.hpp"

#include <atomic>

#include "qaoasim/errors.hpp"

namespace qaoa::kernels {

namespace {

bool detect_avx2() {
#if (defined(__x86_64__) || defined(__i386__)) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

struct Dispatch {
    const detail::KernelTable* table;
    Backend backend;
};

std::atomic<Dispatch*> g_active{nullptr};

Dispatch* make_auto() {
    static Dispatch scalar{&detail::scalar_table, Backend::Scalar};
    static Dispatch avx2{detail::avx2_table(), Backend::Avx2};
    return (detect_avx2() && avx2.table != nullptr) ? &avx2 : &scalar;
}

Dispatch* active() {
    Dispatch* d = g_active.load(std::memory_order_acquire);
    if (d == nullptr) {
        d = make_auto();
        g_active.store(d, std::memory_order_release);
    }
    return d;
}

}  // namespace

bool avx2_supported() { return detect_avx2() && detail::avx2_table() != nullptr; }

void set_backend(Backend b) {
    static Dispatch scalar{&detail::scalar_table, Backend::Scalar};
    static Dispatch avx2{detail::avx2_table(), Backend::Avx2};
    switch (b) {
        case Backend::Auto:
            g_active.store(make_auto(), std::memory_order_release);
            return;
        case Backend::Scalar:
            g_active.store(&scalar, std::memory_order_release);
            return;
        case Backend::Avx2:
            if (!avx2_supported()) {
                throw DomainError("avx2 backend requested but not supported on this CPU");
            }
            g_active.store(&avx2, std::memory_order_release);
            return;
    }
    throw DomainError("unknown kernel backend");
}

Backend active_backend() { return active()->backend; }

const char* backend_name() {
    return active()->backend == Backend::Avx2 ? "avx2" : "scalar";
}

void fwht(cplx* data, int n_qubits) { active()->table->fwht(data, n_qubits); }

void phase_rotate(cplx* a, const double* diag, double theta, std::size_t len) {
    active()->table->phase_rotate(a, diag, theta, len);
}

void diag_mul(cplx* a, const double* diag, std::size_t len) {
    active()->table->diag_mul(a, diag, len);
}

void scale(cplx* a, double s, std::size_t len) { active()->table->scale(a, s, len); }

void add_constant(cplx* a, cplx c, std::size_t len) {
    active()->table->add_constant(a, c, len);
}

double norm_sq(const cplx* a, std::size_t len) { return active()->table->norm_sq(a, len); }

cplx vec_sum(const cplx* a, std::size_t len) { return active()->table->vec_sum(a, len); }

double expectation_dot(const cplx* a, const double* w, std::size_t len) {
    return active()->table->expectation_dot(a, w, len);
}

cplx conj_dot(const cplx* l, const cplx* a, std::size_t len) {
    return active()->table->conj_dot(l, a, len);
}

cplx weighted_conj_dot(const cplx* l, const double* w, const cplx* a, std::size_t len) {
    return active()->table->weighted_conj_dot(l, w, a, len);
}

}  // namespace qaoa::kernels
