#include "riswpt/kernels.hpp"

#include <cmath>

namespace riswpt::kernels {
namespace {

void s_matvec(const double* w, const double* x, const double* bias, double* y,
              std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) {
        const double* row = w + r * cols;
        double acc = bias ? bias[r] : 0.0;
        for (std::size_t c = 0; c < cols; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
}

void s_matvec_transpose(const double* w, const double* g, double* out,
                        std::size_t rows, std::size_t cols) {
    for (std::size_t c = 0; c < cols; ++c) out[c] = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        const double* row = w + r * cols;
        const double gr = g[r];
        for (std::size_t c = 0; c < cols; ++c) out[c] += gr * row[c];
    }
}

void s_rank1_accumulate(double* gw, const double* g, const double* x,
                        std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) {
        double* row = gw + r * cols;
        const double gr = g[r];
        for (std::size_t c = 0; c < cols; ++c) row[c] += gr * x[c];
    }
}

void s_axpy(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double s_dot(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void s_adam_step(double* p, const double* g, double* m, double* v,
                 std::size_t n, double lr, double beta1, double beta2,
                 double eps, double bias1, double bias2) {
    for (std::size_t i = 0; i < n; ++i) {
        m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
        v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
        const double mhat = m[i] / bias1;
        const double vhat = v[i] / bias2;
        p[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
}

void s_sgd_step(double* p, const double* g, std::size_t n, double lr) {
    for (std::size_t i = 0; i < n; ++i) p[i] -= lr * g[i];
}

std::complex<double> s_complex_triple_dot(const std::complex<double>* a,
                                          const std::complex<double>* b,
                                          const std::complex<double>* c,
                                          std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        const double cr = c[i].real(), ci = c[i].imag();
        const double tr = ar * br - ai * bi;
        const double ti = ar * bi + ai * br;
        re += tr * cr - ti * ci;
        im += tr * ci + ti * cr;
    }
    return {re, im};
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable t{s_matvec,     s_matvec_transpose,
                               s_rank1_accumulate, s_axpy,
                               s_dot,        s_adam_step,
                               s_sgd_step,   s_complex_triple_dot};
    return t;
}

}  // namespace riswpt::kernels
