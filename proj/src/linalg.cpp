#include "dephasim/linalg.hpp"

#include <lapacke.h>

#include <cmath>
#include <string>

#include "dephasim/kernels.hpp"

namespace dephasim::linalg {

namespace {

lapack_complex_double* lp(CMat& m) { return reinterpret_cast<lapack_complex_double*>(m.data()); }

}  // namespace

EigH eigh(const CMat& A) {
    if (A.rows() != A.cols()) throw DimensionMismatch("eigh: square required");
    const int n = A.rows();
    // Symmetrize so roundoff-level asymmetry cannot leak into LAPACK.
    CMat h(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) h(i, j) = 0.5 * (A(i, j) + std::conj(A(j, i)));
    std::vector<double> w(n);
    int info = LAPACKE_zheevd(LAPACK_ROW_MAJOR, 'V', 'U', n, lp(h), n, w.data());
    if (info != 0) throw NumericalFailure("zheevd failed, info=" + std::to_string(info));
    return EigH{std::move(w), std::move(h)};
}

CMat solve(const CMat& A, const CMat& B) {
    if (A.rows() != A.cols() || A.rows() != B.rows()) throw DimensionMismatch("solve");
    CMat a = A, b = B;
    const int n = A.rows(), nrhs = B.cols();
    std::vector<lapack_int> ipiv(n);
    int info = LAPACKE_zgesv(LAPACK_ROW_MAJOR, n, nrhs, lp(a), n, ipiv.data(), lp(b), nrhs);
    if (info != 0) throw NumericalFailure("zgesv failed, info=" + std::to_string(info));
    return b;
}

CMat expm(const CMat& A) {
    if (A.rows() != A.cols()) throw DimensionMismatch("expm: square required");
    const int n = A.rows();
    static const double b[] = {
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
        1187353796428800.0,  129060195264000.0,   10559470521600.0,
        670442572800.0,      33522128640.0,       1323241920.0,
        40840800.0,          960960.0,            16380.0,
        182.0,               1.0};
    const double theta13 = 5.371920351148152;

    double nrm = A.one_norm();
    int s = 0;
    if (nrm > theta13) s = int(std::ceil(std::log2(nrm / theta13)));
    CMat a = A;
    if (s > 0) a *= cplx(std::ldexp(1.0, -s));

    const CMat I = CMat::identity(n);
    CMat a2 = kern::gemm(a, a);
    CMat a4 = kern::gemm(a2, a2);
    CMat a6 = kern::gemm(a2, a4);

    CMat u_inner = b[13] * a6 + b[11] * a4 + b[9] * a2;
    CMat u = kern::gemm(a, kern::gemm(a6, u_inner) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * I);
    CMat v_inner = b[12] * a6 + b[10] * a4 + b[8] * a2;
    CMat v = kern::gemm(a6, v_inner) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * I;

    CMat r = solve(v - u, v + u);
    for (int k = 0; k < s; ++k) r = kern::gemm(r, r);
    return r;
}

CMat expm_i_hermitian(const CMat& H, double t) {
    EigH e = eigh(H);
    const int n = H.rows();
    CMat phase(n, n);
    for (int k = 0; k < n; ++k) phase(k, k) = std::polar(1.0, -t * e.w[k]);
    return kern::gemm(kern::gemm(e.V, phase), e.V, 'N', 'C');
}

CMat sqrtm_psd(const CMat& A, double neg_tol) {
    EigH e = eigh(A);
    const int n = A.rows();
    CMat root(n, n);
    for (int k = 0; k < n; ++k) {
        double w = e.w[k];
        if (w < -neg_tol)
            throw NumericalFailure("sqrtm_psd: eigenvalue " + std::to_string(w) +
                                   " below -" + std::to_string(neg_tol));
        root(k, k) = std::sqrt(std::max(w, 0.0));
    }
    return kern::gemm(kern::gemm(e.V, root), e.V, 'N', 'C');
}

std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int n) {
    if (n < 1) throw QuadratureError("gauss_hermite: n >= 1 required");
    // nodes: eigenvalues of the Jacobi matrix, computed without eigenvectors
    // (dsterf) so rules with thousands of points stay cheap
    std::vector<double> nodes(n, 0.0), off(n > 1 ? n - 1 : 0);
    for (int k = 1; k < n; ++k) off[k - 1] = std::sqrt(k / 2.0);
    int info = LAPACKE_dsterf(n, nodes.data(), off.empty() ? nullptr : off.data());
    if (info != 0) throw NumericalFailure("dsterf failed, info=" + std::to_string(info));

    // weights: w_j = 1 / (n * h_{n-1}(x_j)^2) with h_k the orthonormal
    // polynomials of weight exp(-x^2). The recurrence is run with periodic
    // rescaling because h_k grows like exp(x^2/2) near the outermost nodes.
    const double h0 = std::pow(3.14159265358979323846, -0.25);
    std::vector<double> weights(n);
    for (int j = 0; j < n; ++j) {
        const double x = nodes[j];
        double prev = 0.0, cur = h0, logscale = 0.0;
        for (int k = 0; k + 1 < n; ++k) {
            // h_{k+1} = (x h_k - sqrt(k/2) h_{k-1}) / sqrt((k+1)/2)
            double next = (x * cur - std::sqrt(k / 2.0) * prev) / std::sqrt((k + 1) / 2.0);
            prev = cur;
            cur = next;
            if (std::abs(cur) > 1e100) {
                prev *= 1e-100;
                cur *= 1e-100;
                logscale += 100.0 * std::log(10.0);
            }
        }
        const double lw = -std::log(double(n)) - 2.0 * (std::log(std::abs(cur)) + logscale);
        weights[j] = std::exp(lw);
    }
    return {std::move(nodes), std::move(weights)};
}

EigTridiag eig_tridiag(std::vector<double> diag, std::vector<double> off) {
    const int n = int(diag.size());
    if (n < 1 || int(off.size()) != n - 1)
        throw DimensionMismatch("eig_tridiag: off-diagonal must have n-1 entries");
    std::vector<double> z(size_t(n) * n);
    int info = LAPACKE_dstev(LAPACK_ROW_MAJOR, 'V', n, diag.data(),
                             off.empty() ? nullptr : off.data(), z.data(), n);
    if (info != 0) throw NumericalFailure("dstev failed, info=" + std::to_string(info));
    return EigTridiag{std::move(diag), std::move(z)};
}

}  // namespace dephasim::linalg
