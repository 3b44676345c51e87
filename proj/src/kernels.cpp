#include "riswpt/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace riswpt::kernels {

const KernelTable& scalar_table();
const KernelTable* avx2_table();

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Backend detect_default() {
    if (const char* env = std::getenv("RISWPT_KERNELS")) {
        const std::string v(env);
        if (v == "scalar") return Backend::Scalar;
        if (v == "avx2" && avx2_table() && cpu_has_avx2()) return Backend::Avx2;
    }
    if (avx2_table() && cpu_has_avx2()) return Backend::Avx2;
    return Backend::Scalar;
}

Backend& current() {
    static Backend b = detect_default();
    return b;
}

const KernelTable* current_table = nullptr;

const KernelTable& active_table() {
    if (!current_table) current_table = &table(current());
    return *current_table;
}

}  // namespace

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::Scalar: return "scalar";
        case Backend::Avx2: return "avx2";
    }
    return "?";
}

bool backend_supported(Backend b) {
    if (b == Backend::Scalar) return true;
    return avx2_table() != nullptr && cpu_has_avx2();
}

Backend active_backend() { return current(); }

bool set_backend(Backend b) {
    if (!backend_supported(b)) return false;
    current() = b;
    current_table = &table(b);
    return true;
}

const KernelTable& table(Backend b) {
    if (b == Backend::Scalar) return scalar_table();
    if (const KernelTable* t = avx2_table(); t && cpu_has_avx2()) return *t;
    throw std::runtime_error("kernel backend unsupported on this CPU: " +
                             std::string(backend_name(b)));
}

void matvec(const double* w, const double* x, const double* bias, double* y,
            std::size_t rows, std::size_t cols) {
    active_table().matvec(w, x, bias, y, rows, cols);
}

void matvec_transpose(const double* w, const double* g, double* out,
                      std::size_t rows, std::size_t cols) {
    active_table().matvec_transpose(w, g, out, rows, cols);
}

void rank1_accumulate(double* gw, const double* g, const double* x,
                      std::size_t rows, std::size_t cols) {
    active_table().rank1_accumulate(gw, g, x, rows, cols);
}

void axpy(double a, const double* x, double* y, std::size_t n) {
    active_table().axpy(a, x, y, n);
}

double dot(const double* a, const double* b, std::size_t n) {
    return active_table().dot(a, b, n);
}

void adam_step(double* p, const double* g, double* m, double* v,
               std::size_t n, double lr, double beta1, double beta2,
               double eps, double bias1, double bias2) {
    active_table().adam_step(p, g, m, v, n, lr, beta1, beta2, eps, bias1,
                             bias2);
}

void sgd_step(double* p, const double* g, std::size_t n, double lr) {
    active_table().sgd_step(p, g, n, lr);
}

std::complex<double> complex_triple_dot(const std::complex<double>* a,
                                        const std::complex<double>* b,
                                        const std::complex<double>* c,
                                        std::size_t n) {
    return active_table().complex_triple_dot(a, b, c, n);
}

}  // namespace riswpt::kernels
