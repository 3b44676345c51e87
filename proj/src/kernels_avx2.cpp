// AVX2+FMA variants. This translation unit is compiled with -mavx2 -mfma on
// x86-64; dispatch guarantees these run only on CPUs that support them.

#include "riswpt/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <cmath>

namespace riswpt::kernels {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

double v_dot(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i),
                              acc);
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += a[i] * b[i];
    return hsum(acc) + tail;
}

void v_matvec(const double* w, const double* x, const double* bias, double* y,
              std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) {
        const double base = bias ? bias[r] : 0.0;
        y[r] = base + v_dot(w + r * cols, x, cols);
    }
}

void v_axpy(double a, const double* x, double* y, std::size_t n) {
    const __m256d av = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d yi = _mm256_loadu_pd(y + i);
        yi = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), yi);
        _mm256_storeu_pd(y + i, yi);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void v_matvec_transpose(const double* w, const double* g, double* out,
                        std::size_t rows, std::size_t cols) {
    for (std::size_t c = 0; c < cols; ++c) out[c] = 0.0;
    for (std::size_t r = 0; r < rows; ++r) v_axpy(g[r], w + r * cols, out, cols);
}

void v_rank1_accumulate(double* gw, const double* g, const double* x,
                        std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) v_axpy(g[r], x, gw + r * cols, cols);
}

void v_adam_step(double* p, const double* g, double* m, double* v,
                 std::size_t n, double lr, double beta1, double beta2,
                 double eps, double bias1, double bias2) {
    const __m256d b1 = _mm256_set1_pd(beta1);
    const __m256d b2 = _mm256_set1_pd(beta2);
    const __m256d c1 = _mm256_set1_pd(1.0 - beta1);
    const __m256d c2 = _mm256_set1_pd(1.0 - beta2);
    const __m256d inv_bias1 = _mm256_set1_pd(1.0 / bias1);
    const __m256d inv_bias2 = _mm256_set1_pd(1.0 / bias2);
    const __m256d lrv = _mm256_set1_pd(lr);
    const __m256d epsv = _mm256_set1_pd(eps);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d gi = _mm256_loadu_pd(g + i);
        __m256d mi = _mm256_loadu_pd(m + i);
        __m256d vi = _mm256_loadu_pd(v + i);
        mi = _mm256_fmadd_pd(b1, mi, _mm256_mul_pd(c1, gi));
        vi = _mm256_fmadd_pd(b2, vi, _mm256_mul_pd(c2, _mm256_mul_pd(gi, gi)));
        _mm256_storeu_pd(m + i, mi);
        _mm256_storeu_pd(v + i, vi);
        const __m256d mhat = _mm256_mul_pd(mi, inv_bias1);
        const __m256d vhat = _mm256_mul_pd(vi, inv_bias2);
        const __m256d denom = _mm256_add_pd(_mm256_sqrt_pd(vhat), epsv);
        __m256d pi = _mm256_loadu_pd(p + i);
        pi = _mm256_sub_pd(pi,
                           _mm256_div_pd(_mm256_mul_pd(lrv, mhat), denom));
        _mm256_storeu_pd(p + i, pi);
    }
    for (; i < n; ++i) {
        m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
        v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
        const double mhat = m[i] / bias1;
        const double vhat = v[i] / bias2;
        p[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
}

void v_sgd_step(double* p, const double* g, std::size_t n, double lr) {
    const __m256d lrv = _mm256_set1_pd(lr);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d pi = _mm256_loadu_pd(p + i);
        pi = _mm256_fnmadd_pd(lrv, _mm256_loadu_pd(g + i), pi);
        _mm256_storeu_pd(p + i, pi);
    }
    for (; i < n; ++i) p[i] -= lr * g[i];
}

// Complex multiply of interleaved pairs: for each 128-bit lane holding
// (re, im), fmaddsub gives (ar*br - ai*bi, ai*br + ar*bi).
inline __m256d cmul(__m256d a, __m256d b) {
    const __m256d b_re = _mm256_movedup_pd(b);
    const __m256d b_im = _mm256_permute_pd(b, 0xF);
    const __m256d a_sw = _mm256_permute_pd(a, 0x5);
    return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

std::complex<double> v_complex_triple_dot(const std::complex<double>* a,
                                          const std::complex<double>* b,
                                          const std::complex<double>* c,
                                          std::size_t n) {
    const double* ap = reinterpret_cast<const double*>(a);
    const double* bp = reinterpret_cast<const double*>(b);
    const double* cp = reinterpret_cast<const double*>(c);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d av = _mm256_loadu_pd(ap + 2 * i);
        const __m256d bv = _mm256_loadu_pd(bp + 2 * i);
        const __m256d cv = _mm256_loadu_pd(cp + 2 * i);
        acc = _mm256_add_pd(acc, cmul(cmul(av, bv), cv));
    }
    __m128d lo = _mm256_castpd256_pd128(acc);
    __m128d hi = _mm256_extractf128_pd(acc, 1);
    lo = _mm_add_pd(lo, hi);
    double re = _mm_cvtsd_f64(lo);
    double im = _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
    for (; i < n; ++i) {
        const std::complex<double> t = a[i] * b[i] * c[i];
        re += t.real();
        im += t.imag();
    }
    return {re, im};
}

}  // namespace

const KernelTable* avx2_table() {
    static const KernelTable t{v_matvec,     v_matvec_transpose,
                               v_rank1_accumulate, v_axpy,
                               v_dot,        v_adam_step,
                               v_sgd_step,   v_complex_triple_dot};
    return &t;
}

}  // namespace riswpt::kernels

#else

namespace riswpt::kernels {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace riswpt::kernels

#endif
