#pragma once
#include <vector>

#include "dephasim/cmat.hpp"

// Data-parallel kernels. Each kernel has an OpenMP implementation here and a
// serial reference under kern::ref with identical semantics; tests compare the
// two and bench_kernels times them. Parallel loops are arranged so every
// output element is produced by one thread with a fixed serial reduction
// order, which keeps results independent of the thread count.
namespace dephasim::kern {

// op: 'N' plain, 'C' conjugate transpose. C = op(A) * op(B).
CMat gemm(const CMat& A, const CMat& B, char opA = 'N', char opB = 'N');

CMat kron(const CMat& A, const CMat& B);

// Gram matrix of the diagonal Kraus factors of the dephasing channel:
// G(n,m) = sum_k d_k(n) d_k(m),  d_k(n) = sqrt(kt^k/k!) n^k exp(-kt n^2/2).
// Factors are evaluated in log space; every d_k(n) is <= 1.
CMat kraus_gram(int dim, double kappa_t, int n_terms);

// Attenuation factor per coherence offset d for the Gaussian phase average
// evaluated with the given quadrature rule on exp(-x^2):
// factor[d] = (1/sqrt(pi)) sum_j w_j cos(sqrt(2 kt) x_j d),  d = 0..dim-1.
std::vector<double> phase_avg_factors(int dim, double kappa_t,
                                      const std::vector<double>& nodes,
                                      const std::vector<double>& weights);

// <n|D(alpha)|m> for n,m < dim via the associated-Laguerre closed form,
// evaluated through a prefactored recurrence whose intermediates stay O(1).
CMat displacement_matrix(int dim, cplx alpha);

// Single Wigner value W(beta) = (2/pi) Tr[rho D(2 beta) Parity], computed as
// the Fock-basis sum over coherence diagonals (no matrix build).
double wigner_point(const CMat& rho, cplx beta);

// Angular Fourier modes of W at each radius: modes[d * nrad + i] = A_d(r_i)
// with W(r, theta) = A_0(r) + 2 Re sum_{d>=1} A_d(r) e^{i d theta}.
std::vector<cplx> wigner_modes(const CMat& rho, const std::vector<double>& radii);

// Row-major field values[i * n_angular + j] = W(r_i, theta_j),
// theta_j = 2 pi j / n_angular. Fast path: radial modes + Fourier synthesis.
std::vector<double> wigner_field(const CMat& rho, const std::vector<double>& radii,
                                 int n_angular);

namespace ref {

CMat gemm(const CMat& A, const CMat& B, char opA = 'N', char opB = 'N');

// Textbook operator-sum accumulation sum_k E_k rho E_k (E_k diagonal).
CMat kraus_apply(const CMat& rho, double kappa_t, int n_terms);

// Textbook quadrature accumulation (1/sqrt(pi)) sum_j w_j U_j rho U_j^dag,
// U_j = exp(i n phi_j).
CMat phase_avg_apply(const CMat& rho, double kappa_t,
                     const std::vector<double>& nodes,
                     const std::vector<double>& weights);

// Direct per-point Moyal sums, serial.
std::vector<double> wigner_field(const CMat& rho, const std::vector<double>& radii,
                                 int n_angular);

}  // namespace ref

}  // namespace dephasim::kern
