#pragma once
#include <utility>
#include <vector>

#include "dephasim/cmat.hpp"

namespace dephasim::linalg {

struct EigH {
    std::vector<double> w;  // ascending
    CMat V;                 // columns are eigenvectors, A = V diag(w) V^dag
};

// Hermitian eigendecomposition (LAPACK zheevd). Input is symmetrized from its
// upper triangle; the caller is responsible for hermiticity policy.
EigH eigh(const CMat& A);

// Solve A X = B (LAPACK zgesv).
CMat solve(const CMat& A, const CMat& B);

// Scaling-and-squaring Pade-13 matrix exponential. Contract (tested):
// max-norm of expm(A) expm(-A) - I <= 1e-9 for the generators used here.
CMat expm(const CMat& A);

// exp(-i t H) for Hermitian H via eigendecomposition.
CMat expm_i_hermitian(const CMat& H, double t);

// Square root of a PSD Hermitian matrix. Eigenvalues in [-neg_tol, 0) are
// clamped to zero; below -neg_tol throws NumericalFailure.
CMat sqrtm_psd(const CMat& A, double neg_tol = 1e-8);

// Gauss-Hermite rule for weight exp(-x^2) via Golub-Welsch (LAPACK dstev).
// Returns {nodes, weights}; sum of weights = sqrt(pi).
std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int n);

struct EigTridiag {
    std::vector<double> w;    // ascending
    std::vector<double> z;    // row-major n x n, z[i*n+k] = component i of eigenvector k
};

// Real symmetric tridiagonal eigendecomposition (LAPACK dstev).
EigTridiag eig_tridiag(std::vector<double> diag, std::vector<double> off);

}  // namespace dephasim::linalg
