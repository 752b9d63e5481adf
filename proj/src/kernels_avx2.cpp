// Copyright 2026 The QAOASim Authors
// SPDX-License-Identifier: Apache-2.0

// AVX2+FMA kernel variants. A __m256d holds two complex<double>; complex
// arrays are viewed as double arrays of twice the length (the std::complex
// layout guarantees this). Compiled with -mavx2 -mfma on x86 targets only.

#include "qaoasim/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <cmath>

namespace qaoa::kernels {

namespace {

// Complex multiply of packed [re0, im0, re1, im1] by [cr0, ci0, cr1, ci1].
inline __m256d cmul(__m256d a, __m256d b) {
    const __m256d b_re = _mm256_movedup_pd(b);           // [cr0, cr0, cr1, cr1]
    const __m256d b_im = _mm256_permute_pd(b, 0xF);      // [ci0, ci0, ci1, ci1]
    const __m256d a_sw = _mm256_permute_pd(a, 0x5);      // [im0, re0, im1, re1]
    return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

void scale_avx2(cplx* a, double s, std::size_t len);

void fwht_avx2(cplx* data, int n_qubits) {
    double* d = reinterpret_cast<double*>(data);
    const std::size_t len = std::size_t{2} << n_qubits;  // doubles

    // Stage h=2 doubles: butterfly between adjacent complex elements.
    for (std::size_t i = 0; i + 4 <= len; i += 4) {
        const __m256d v = _mm256_loadu_pd(d + i);
        const __m256d w = _mm256_permute2f128_pd(v, v, 0x01);
        const __m256d add = _mm256_add_pd(v, w);
        const __m256d sub = _mm256_sub_pd(v, w);
        _mm256_storeu_pd(d + i, _mm256_permute2f128_pd(add, sub, 0x20));
    }
    if (len == 2) {
        // n_qubits == 0: identity.
        return;
    }

    // Remaining stages: block butterflies at growing complex strides.
    for (std::size_t h = 4; h < len; h <<= 1) {
        for (std::size_t i = 0; i < len; i += h << 1) {
            for (std::size_t j = i; j < i + h; j += 4) {
                const __m256d x = _mm256_loadu_pd(d + j);
                const __m256d y = _mm256_loadu_pd(d + j + h);
                _mm256_storeu_pd(d + j, _mm256_add_pd(x, y));
                _mm256_storeu_pd(d + j + h, _mm256_sub_pd(x, y));
            }
        }
    }

    const double norm = std::pow(0.5, 0.5 * n_qubits);
    scale_avx2(data, norm, std::size_t{1} << n_qubits);
}

void phase_rotate_avx2(cplx* a, const double* diag, double theta, std::size_t len) {
    double* d = reinterpret_cast<double*>(a);
    std::size_t i = 0;
    for (; i + 2 <= len; i += 2) {
        const double t0 = -theta * diag[i];
        const double t1 = -theta * diag[i + 1];
        const __m256d ph = _mm256_setr_pd(std::cos(t0), std::sin(t0), std::cos(t1), std::sin(t1));
        const __m256d v = _mm256_loadu_pd(d + 2 * i);
        _mm256_storeu_pd(d + 2 * i, cmul(v, ph));
    }
    for (; i < len; ++i) {
        const double t = -theta * diag[i];
        a[i] *= cplx(std::cos(t), std::sin(t));
    }
}

void diag_mul_avx2(cplx* a, const double* diag, std::size_t len) {
    double* d = reinterpret_cast<double*>(a);
    std::size_t i = 0;
    for (; i + 2 <= len; i += 2) {
        const __m256d w = _mm256_setr_pd(diag[i], diag[i], diag[i + 1], diag[i + 1]);
        const __m256d v = _mm256_loadu_pd(d + 2 * i);
        _mm256_storeu_pd(d + 2 * i, _mm256_mul_pd(v, w));
    }
    for (; i < len; ++i) a[i] *= diag[i];
}

void scale_avx2(cplx* a, double s, std::size_t len) {
    double* d = reinterpret_cast<double*>(a);
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 2 <= len; i += 2) {
        _mm256_storeu_pd(d + 2 * i, _mm256_mul_pd(_mm256_loadu_pd(d + 2 * i), vs));
    }
    for (; i < len; ++i) a[i] *= s;
}

void add_constant_avx2(cplx* a, cplx c, std::size_t len) {
    double* d = reinterpret_cast<double*>(a);
    const __m256d vc = _mm256_setr_pd(c.real(), c.imag(), c.real(), c.imag());
    std::size_t i = 0;
    for (; i + 2 <= len; i += 2) {
        _mm256_storeu_pd(d + 2 * i, _mm256_add_pd(_mm256_loadu_pd(d + 2 * i), vc));
    }
    for (; i < len; ++i) a[i] += c;
}

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double norm_sq_avx2(const cplx* a, std::size_t len) {
    const double* d = reinterpret_cast<const double*>(a);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= len; i += 2) {
        const __m256d v = _mm256_loadu_pd(d + 2 * i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double s = hsum(acc);
    for (; i < len; ++i) {
        s += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
    }
    return s;
}

cplx vec_sum_avx2(const cplx* a, std::size_t len) {
    const double* d = reinterpret_cast<const double*>(a);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= len; i += 2) {
        acc = _mm256_add_pd(acc, _mm256_loadu_pd(d + 2 * i));
    }
    const __m128d lo = _mm256_castpd256_pd128(acc);
    const __m128d hi = _mm256_extractf128_pd(acc, 1);
    const __m128d s = _mm_add_pd(lo, hi);  // [re, im]
    alignas(16) double out[2];
    _mm_store_pd(out, s);
    double re = out[0], im = out[1];
    for (; i < len; ++i) {
        re += a[i].real();
        im += a[i].imag();
    }
    return {re, im};
}

double expectation_dot_avx2(const cplx* a, const double* w, std::size_t len) {
    const double* d = reinterpret_cast<const double*>(a);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= len; i += 2) {
        const __m256d v = _mm256_loadu_pd(d + 2 * i);
        const __m256d vw = _mm256_setr_pd(w[i], w[i], w[i + 1], w[i + 1]);
        acc = _mm256_fmadd_pd(_mm256_mul_pd(v, v), vw, acc);
    }
    double s = hsum(acc);
    for (; i < len; ++i) {
        s += (a[i].real() * a[i].real() + a[i].imag() * a[i].imag()) * w[i];
    }
    return s;
}

// Accumulates [re, im, re, im] of conj(l)*a for two lanes at once.
inline __m256d conj_mul_acc(__m256d l, __m256d v, __m256d acc) {
    // re: l.re*a.re + l.im*a.im ; im: l.re*a.im - l.im*a.re
    const __m256d l_re = _mm256_movedup_pd(l);
    const __m256d l_im = _mm256_permute_pd(l, 0xF);
    const __m256d v_sw = _mm256_permute_pd(v, 0x5);
    // fmsubadd: even lanes a*b+c... we need even: +, odd: -. Use two fmas on
    // split parts instead: acc += l_re*v + sign_adj(l_im*v_sw)
    const __m256d t = _mm256_mul_pd(l_im, v_sw);  // [l.im*a.im, l.im*a.re, ...]
    const __m256d sign = _mm256_setr_pd(1.0, -1.0, 1.0, -1.0);
    return _mm256_fmadd_pd(l_re, v, _mm256_fmadd_pd(t, sign, acc));
}

cplx conj_dot_avx2(const cplx* l, const cplx* a, std::size_t len) {
    const double* dl = reinterpret_cast<const double*>(l);
    const double* da = reinterpret_cast<const double*>(a);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= len; i += 2) {
        acc = conj_mul_acc(_mm256_loadu_pd(dl + 2 * i), _mm256_loadu_pd(da + 2 * i), acc);
    }
    const __m128d lo = _mm256_castpd256_pd128(acc);
    const __m128d hi = _mm256_extractf128_pd(acc, 1);
    alignas(16) double out[2];
    _mm_store_pd(out, _mm_add_pd(lo, hi));
    double re = out[0], im = out[1];
    for (; i < len; ++i) {
        re += l[i].real() * a[i].real() + l[i].imag() * a[i].imag();
        im += l[i].real() * a[i].imag() - l[i].imag() * a[i].real();
    }
    return {re, im};
}

cplx weighted_conj_dot_avx2(const cplx* l, const double* w, const cplx* a, std::size_t len) {
    const double* dl = reinterpret_cast<const double*>(l);
    const double* da = reinterpret_cast<const double*>(a);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= len; i += 2) {
        const __m256d vw = _mm256_setr_pd(w[i], w[i], w[i + 1], w[i + 1]);
        const __m256d v = _mm256_mul_pd(_mm256_loadu_pd(da + 2 * i), vw);
        acc = conj_mul_acc(_mm256_loadu_pd(dl + 2 * i), v, acc);
    }
    const __m128d lo = _mm256_castpd256_pd128(acc);
    const __m128d hi = _mm256_extractf128_pd(acc, 1);
    alignas(16) double out[2];
    _mm_store_pd(out, _mm_add_pd(lo, hi));
    double re = out[0], im = out[1];
    for (; i < len; ++i) {
        const cplx t = std::conj(l[i]) * a[i] * w[i];
        re += t.real();
        im += t.imag();
    }
    return {re, im};
}

}  // namespace

namespace detail {

const KernelTable* avx2_table() {
    static const KernelTable t = {
        fwht_avx2,     phase_rotate_avx2,   diag_mul_avx2, scale_avx2,
        add_constant_avx2, norm_sq_avx2,    vec_sum_avx2,  expectation_dot_avx2,
        conj_dot_avx2, weighted_conj_dot_avx2,
    };
    return &t;
}

}  // namespace detail

}  // namespace qaoa::kernels

#else  // non-x86 targets: no AVX2 path

namespace qaoa::kernels::detail {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace qaoa::kernels::detail

#endif
