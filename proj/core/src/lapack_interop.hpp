#pragma once

#include <complex>
#include <vector>

namespace speclab::detail {

// Thin wrappers over the LAPACK/BLAS routines this library needs;
// all matrices column-major, square. Input arrays are clobbered.

std::vector<std::complex<double>> lapack_eigs_real(std::vector<double>& a, long n);
std::vector<std::complex<double>> lapack_eigs_complex(std::vector<std::complex<double>>& a, long n);

// det of the matrix via pivoted LU, scale-guarded against overflow.
std::complex<double> lu_det_complex(std::vector<std::complex<double>>& a, long n);

// C = A * B.
void gemm_real(const double* a, const double* b, double* c, long n);
void gemm_complex(const std::complex<double>* a, const std::complex<double>* b,
                  std::complex<double>* c, long n);

}  // namespace speclab::detail
