#pragma once

#include <complex>
#include <cstddef>

// Data-parallel inner loops shared by the dense-net trainers and the channel
// math. Every kernel has a scalar reference implementation and, on x86-64
// with AVX2+FMA, a vectorized variant selected at runtime. Backends are
// interchangeable up to floating-point reassociation; tests pin the two
// against each other.
namespace riswpt::kernels {

enum class Backend { Scalar, Avx2 };

const char* backend_name(Backend b);
bool backend_supported(Backend b);

// Currently dispatched backend. Defaults to the best supported one;
// the RISWPT_KERNELS env var ("scalar" | "avx2") overrides at startup.
Backend active_backend();

// Force a backend (tests use this). Returns false if unsupported on this CPU.
bool set_backend(Backend b);

// y = W x + bias, W row-major (rows x cols). bias may be nullptr.
void matvec(const double* w, const double* x, const double* bias, double* y,
            std::size_t rows, std::size_t cols);

// out = W^T g (out has length cols, overwritten).
void matvec_transpose(const double* w, const double* g, double* out,
                      std::size_t rows, std::size_t cols);

// GW += g x^T (rank-1 gradient accumulation into a rows x cols matrix).
void rank1_accumulate(double* gw, const double* g, const double* x,
                      std::size_t rows, std::size_t cols);

// y += a x
void axpy(double a, const double* x, double* y, std::size_t n);

double dot(const double* a, const double* b, std::size_t n);

// Elementwise Adam update with precomputed bias corrections:
//   m <- b1 m + (1-b1) g;  v <- b2 v + (1-b2) g^2
//   p <- p - lr * (m/bias1) / (sqrt(v/bias2) + eps)
void adam_step(double* p, const double* g, double* m, double* v,
               std::size_t n, double lr, double beta1, double beta2,
               double eps, double bias1, double bias2);

// p -= lr g
void sgd_step(double* p, const double* g, std::size_t n, double lr);

// sum_k a_k b_k c_k over interleaved complex arrays. This is the effective
// channel reduction h + H Phi g evaluated with b holding the unit phasors.
std::complex<double> complex_triple_dot(const std::complex<double>* a,
                                        const std::complex<double>* b,
                                        const std::complex<double>* c,
                                        std::size_t n);

// Internal: per-backend entry points, exposed for the equivalence tests.
struct KernelTable {
    void (*matvec)(const double*, const double*, const double*, double*,
                   std::size_t, std::size_t);
    void (*matvec_transpose)(const double*, const double*, double*,
                             std::size_t, std::size_t);
    void (*rank1_accumulate)(double*, const double*, const double*,
                             std::size_t, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    double (*dot)(const double*, const double*, std::size_t);
    void (*adam_step)(double*, const double*, double*, double*, std::size_t,
                      double, double, double, double, double, double);
    void (*sgd_step)(double*, const double*, std::size_t, double);
    std::complex<double> (*complex_triple_dot)(const std::complex<double>*,
                                               const std::complex<double>*,
                                               const std::complex<double>*,
                                               std::size_t);
};

const KernelTable& table(Backend b);  // throws if unsupported

}  // namespace riswpt::kernels
