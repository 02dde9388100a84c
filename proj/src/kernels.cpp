#include "dephasim/kernels.hpp"

#include <cmath>

namespace dephasim::kern {

namespace {

constexpr double kPi = 3.14159265358979323846;

CMat apply_op(const CMat& A, char op) {
    if (op == 'N') return A;
    if (op == 'C') return A.dagger();
    throw DephasimError("gemm: op must be 'N' or 'C'");
}

void gemm_rows(const CMat& A, const CMat& B, CMat& C, int i) {
    const int n = B.cols(), kk = A.cols();
    for (int k = 0; k < kk; ++k) {
        const cplx a = A(i, k);
        if (a == cplx(0.0)) continue;
        for (int j = 0; j < n; ++j) C(i, j) += a * B(k, j);
    }
}

// Diagonal Kraus factor d_k(n) = sqrt(kt^k / k!) n^k exp(-kt n^2 / 2),
// evaluated in log space; always <= 1.
double kraus_factor(int k, int n, double kappa_t) {
    if (n == 0) return k == 0 ? 1.0 : 0.0;
    if (k == 0) return std::exp(-kappa_t * n * n / 2.0);
    double ln = 0.5 * (k * std::log(kappa_t) - std::lgamma(k + 1.0)) +
                k * std::log(double(n)) - kappa_t * n * n / 2.0;
    return std::exp(ln);
}

// B[m] = exp(-x/2) x^(d/2) sqrt(m!/(m+d)!) L_m^(d)(x) for m = 0..count-1.
// These are the moduli-scale matrix elements <m+d|D|m> (all O(1)), so the
// three-term recurrence runs on bounded quantities.
void displaced_block(double x, int d, int count, double* B) {
    if (count <= 0) return;
    if (x == 0.0) {
        for (int m = 0; m < count; ++m) B[m] = (d == 0) ? 1.0 : 0.0;
        return;
    }
    B[0] = std::exp(-x / 2.0 + 0.5 * (d * std::log(x) - std::lgamma(d + 1.0)));
    if (count == 1) return;
    B[1] = (d + 1.0 - x) * B[0] / std::sqrt(1.0 * (d + 1.0));
    for (int m = 1; m + 1 < count; ++m) {
        B[m + 1] = ((2.0 * m + d + 1.0 - x) * B[m] -
                    std::sqrt(double(m) * (m + d)) * B[m - 1]) /
                   std::sqrt(double(m + 1) * (m + d + 1.0));
    }
}

// S_d = sum_m rho(m, m+d) (-1)^m B_m^d(x); caller applies e^{i d phi}.
cplx coherence_diagonal_sum(const CMat& rho, int d, double x, std::vector<double>& scratch) {
    const int n = rho.rows();
    scratch.resize(n);
    displaced_block(x, d, n - d, scratch.data());
    cplx s = 0.0;
    double sign = 1.0;
    for (int m = 0; m + d < n; ++m, sign = -sign) s += rho(m, m + d) * sign * scratch[m];
    return s;
}

}  // namespace

CMat gemm(const CMat& A, const CMat& B, char opA, char opB) {
    CMat a = apply_op(A, opA), b = apply_op(B, opB);
    if (a.cols() != b.rows()) throw DimensionMismatch("gemm: inner dims");
    CMat c(a.rows(), b.cols());
#pragma omp parallel for schedule(static)
    for (int i = 0; i < a.rows(); ++i) gemm_rows(a, b, c, i);
    return c;
}

CMat kron(const CMat& A, const CMat& B) {
    CMat c(A.rows() * B.rows(), A.cols() * B.cols());
#pragma omp parallel for schedule(static)
    for (int ia = 0; ia < A.rows(); ++ia)
        for (int ja = 0; ja < A.cols(); ++ja) {
            const cplx a = A(ia, ja);
            for (int ib = 0; ib < B.rows(); ++ib)
                for (int jb = 0; jb < B.cols(); ++jb)
                    c(ia * B.rows() + ib, ja * B.cols() + jb) = a * B(ib, jb);
        }
    return c;
}

CMat kraus_gram(int dim, double kappa_t, int n_terms) {
    // Factor table laid out T[n][k] so the k-contraction below streams two
    // contiguous rows; n_terms grows like kappa_t * dim^2, so the table is
    // far bigger than cache and the access order decides the runtime.
    std::vector<double> T(size_t(dim) * n_terms);
#pragma omp parallel for schedule(static)
    for (int n = 0; n < dim; ++n)
        for (int k = 0; k < n_terms; ++k) T[size_t(n) * n_terms + k] = kraus_factor(k, n, kappa_t);

    CMat g(dim, dim);
#pragma omp parallel for schedule(dynamic)
    for (int n = 0; n < dim; ++n) {
        const double* tn = &T[size_t(n) * n_terms];
        for (int m = n; m < dim; ++m) {
            const double* tm = &T[size_t(m) * n_terms];
            double s = 0.0;
            for (int k = 0; k < n_terms; ++k) s += tn[k] * tm[k];
            g(n, m) = s;
            g(m, n) = s;
        }
    }
    return g;
}

std::vector<double> phase_avg_factors(int dim, double kappa_t,
                                      const std::vector<double>& nodes,
                                      const std::vector<double>& weights) {
    const double c = std::sqrt(2.0 * kappa_t);
    std::vector<double> f(dim);
#pragma omp parallel for schedule(static)
    for (int d = 0; d < dim; ++d) {
        double s = 0.0;
        for (size_t j = 0; j < nodes.size(); ++j) s += weights[j] * std::cos(c * nodes[j] * d);
        f[d] = s / std::sqrt(kPi);
    }
    return f;
}

CMat displacement_matrix(int dim, cplx alpha) {
    const double x = std::norm(alpha);
    if (x == 0.0) return CMat::identity(dim);
    const double phi = std::arg(alpha);
    CMat D(dim, dim);
    std::vector<double> B(dim);
#pragma omp parallel for schedule(static) firstprivate(B)
    for (int d = 0; d < dim; ++d) {
        displaced_block(x, d, dim - d, B.data());
        const cplx up = std::polar(1.0, d * phi);
        const cplx down = (d % 2 ? -1.0 : 1.0) * std::conj(up);
        for (int m = 0; m + d < dim; ++m) {
            D(m + d, m) = up * B[m];
            if (d > 0) D(m, m + d) = down * B[m];
        }
    }
    return D;
}

double wigner_point(const CMat& rho, cplx beta) {
    const cplx gamma = 2.0 * beta;
    const double x = std::norm(gamma);
    const double phi = std::arg(gamma);
    std::vector<double> scratch;
    cplx acc = coherence_diagonal_sum(rho, 0, x, scratch);
    for (int d = 1; d < rho.rows(); ++d) {
        cplx s = coherence_diagonal_sum(rho, d, x, scratch);
        acc += 2.0 * std::real(std::polar(1.0, d * phi) * s);
    }
    return 2.0 / kPi * std::real(acc);
}

std::vector<cplx> wigner_modes(const CMat& rho, const std::vector<double>& radii) {
    const int n = rho.rows();
    const int nrad = int(radii.size());
    std::vector<cplx> modes(size_t(n) * nrad);
    std::vector<double> scratch;
#pragma omp parallel for schedule(static) firstprivate(scratch)
    for (int i = 0; i < nrad; ++i) {
        const double x = 4.0 * radii[i] * radii[i];
        for (int d = 0; d < n; ++d)
            modes[size_t(d) * nrad + i] =
                2.0 / kPi * coherence_diagonal_sum(rho, d, x, scratch);
    }
    return modes;
}

std::vector<double> wigner_field(const CMat& rho, const std::vector<double>& radii,
                                 int n_angular) {
    const int n = rho.rows();
    const int nrad = int(radii.size());
    std::vector<cplx> modes = wigner_modes(rho, radii);
    std::vector<double> vals(size_t(nrad) * n_angular);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < nrad; ++i)
        for (int j = 0; j < n_angular; ++j) {
            const cplx ph = std::polar(1.0, 2.0 * kPi * j / n_angular);
            cplx p = ph;
            double w = std::real(modes[i]);
            for (int d = 1; d < n; ++d) {
                w += 2.0 * std::real(modes[size_t(d) * nrad + i] * p);
                p *= ph;
            }
            vals[size_t(i) * n_angular + j] = w;
        }
    return vals;
}

namespace ref {

CMat gemm(const CMat& A, const CMat& B, char opA, char opB) {
    CMat a = apply_op(A, opA), b = apply_op(B, opB);
    if (a.cols() != b.rows()) throw DimensionMismatch("gemm: inner dims");
    CMat c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i) gemm_rows(a, b, c, i);
    return c;
}

CMat kraus_apply(const CMat& rho, double kappa_t, int n_terms) {
    const int dim = rho.rows();
    CMat acc(dim, dim);
    std::vector<double> d(dim);
    for (int k = 0; k < n_terms; ++k) {
        for (int n = 0; n < dim; ++n) d[n] = kraus_factor(k, n, kappa_t);
        for (int n = 0; n < dim; ++n)
            for (int m = 0; m < dim; ++m) acc(n, m) += d[n] * rho(n, m) * d[m];
    }
    return acc;
}

CMat phase_avg_apply(const CMat& rho, double kappa_t,
                     const std::vector<double>& nodes,
                     const std::vector<double>& weights) {
    const int dim = rho.rows();
    const double c = std::sqrt(2.0 * kappa_t);
    CMat acc(dim, dim);
    for (size_t j = 0; j < nodes.size(); ++j) {
        const double phi = c * nodes[j];
        const double w = weights[j] / std::sqrt(kPi);
        for (int n = 0; n < dim; ++n)
            for (int m = 0; m < dim; ++m)
                acc(n, m) += w * std::polar(1.0, (n - m) * phi) * rho(n, m);
    }
    return acc;
}

std::vector<double> wigner_field(const CMat& rho, const std::vector<double>& radii,
                                 int n_angular) {
    const int nrad = int(radii.size());
    std::vector<double> vals(size_t(nrad) * n_angular);
    for (int i = 0; i < nrad; ++i)
        for (int j = 0; j < n_angular; ++j) {
            const double th = 2.0 * kPi * j / n_angular;
            vals[size_t(i) * n_angular + j] = wigner_point(rho, std::polar(radii[i], th));
        }
    return vals;
}

}  // namespace ref

}  // namespace dephasim::kern
