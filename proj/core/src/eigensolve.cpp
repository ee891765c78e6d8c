#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>

#include <complex>

#include <lapacke.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "lapack_interop.hpp"
#include "speclab/errors.hpp"

extern "C" {
void dgemm_(const char* transa, const char* transb, const int* m, const int* n, const int* k,
            const double* alpha, const double* a, const int* lda, const double* b, const int* ldb,
            const double* beta, double* c, const int* ldc);
void zgemm_(const char* transa, const char* transb, const int* m, const int* n, const int* k,
            const std::complex<double>* alpha, const std::complex<double>* a, const int* lda,
            const std::complex<double>* b, const int* ldb, const std::complex<double>* beta,
            std::complex<double>* c, const int* ldc);
}

namespace speclab::detail {

namespace {

[[noreturn]] void bad_argument(const char* routine, int info) {
    std::ostringstream os;
    os << routine << ": illegal argument " << -info;
    throw ComputeError(os.str());
}

}  // namespace

std::vector<std::complex<double>> lapack_eigs_real(std::vector<double>& a, long n) {
    const lapack_int ln = static_cast<lapack_int>(n);
    std::vector<double> wr(static_cast<size_t>(n)), wi(static_cast<size_t>(n));
    const lapack_int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', ln, a.data(), ln, wr.data(),
                                          wi.data(), nullptr, 1, nullptr, 1);
    if (info < 0) bad_argument("dgeev", static_cast<int>(info));
    if (info > 0) {
        std::vector<std::complex<double>> converged;
        for (long i = info; i < n; ++i)
            converged.emplace_back(wr[static_cast<size_t>(i)], wi[static_cast<size_t>(i)]);
        std::ostringstream os;
        os << "dgeev: QR iteration failed to converge; " << n - info
           << " trailing eigenvalues are valid";
        throw EigensolveError(os.str(), static_cast<int>(info), std::move(converged));
    }
    std::vector<std::complex<double>> w(static_cast<size_t>(n));
    for (long i = 0; i < n; ++i)
        w[static_cast<size_t>(i)] = {wr[static_cast<size_t>(i)], wi[static_cast<size_t>(i)]};
    return w;
}

std::vector<std::complex<double>> lapack_eigs_complex(std::vector<std::complex<double>>& a, long n) {
    const lapack_int ln = static_cast<lapack_int>(n);
    std::vector<std::complex<double>> w(static_cast<size_t>(n));
    const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', ln, a.data(), ln, w.data(),
                                          nullptr, 1, nullptr, 1);
    if (info < 0) bad_argument("zgeev", static_cast<int>(info));
    if (info > 0) {
        std::vector<std::complex<double>> converged(w.begin() + info, w.end());
        std::ostringstream os;
        os << "zgeev: QR iteration failed to converge; " << n - info
           << " trailing eigenvalues are valid";
        throw EigensolveError(os.str(), static_cast<int>(info), std::move(converged));
    }
    return w;
}

std::complex<double> lu_det_complex(std::vector<std::complex<double>>& a, long n) {
    const lapack_int ln = static_cast<lapack_int>(n);
    std::vector<lapack_int> ipiv(static_cast<size_t>(n));
    const lapack_int info =
        LAPACKE_zgetrf(LAPACK_COL_MAJOR, ln, ln, a.data(), ln, ipiv.data());
    if (info < 0) bad_argument("zgetrf", static_cast<int>(info));
    if (info > 0) return 0.0;  // exactly singular factor
    std::complex<double> mantissa = 1.0;
    double log_scale = 0.0;
    for (long i = 0; i < n; ++i) {
        mantissa *= a[static_cast<size_t>(i) * static_cast<size_t>(n) + static_cast<size_t>(i)];
        if (ipiv[static_cast<size_t>(i)] != static_cast<lapack_int>(i) + 1) mantissa = -mantissa;
        const double mag = std::abs(mantissa);
        if (mag > 1e100 || (mag > 0.0 && mag < 1e-100)) {
            mantissa /= mag;
            log_scale += std::log(mag);
        }
    }
    return mantissa * std::exp(log_scale);
}

void gemm_real(const double* a, const double* b, double* c, long n) {
    const int ni = static_cast<int>(n);
    const double one = 1.0, zero = 0.0;
    dgemm_("N", "N", &ni, &ni, &ni, &one, a, &ni, b, &ni, &zero, c, &ni);
}

void gemm_complex(const std::complex<double>* a, const std::complex<double>* b,
                  std::complex<double>* c, long n) {
    const int ni = static_cast<int>(n);
    const std::complex<double> one = 1.0, zero = 0.0;
    zgemm_("N", "N", &ni, &ni, &ni, &one, a, &ni, b, &ni, &zero, c, &ni);
}

}  // namespace speclab::detail
