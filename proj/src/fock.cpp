#include "dephasim/fock.hpp"

#include <cmath>

#include "dephasim/kernels.hpp"

namespace dephasim {

StateVector StateVector::normalized(FockSpace s, CVec amps, const Tolerances& tol) {
    if (int(amps.size()) != s.dim) throw DimensionMismatch("StateVector: size != dim");
    double n = vec_norm(amps);
    if (n < tol.state_norm)
        throw DegenerateState("state norm " + std::to_string(n) + " below threshold");
    for (cplx& z : amps) z /= n;
    return StateVector(s, std::move(amps));
}

double StateVector::tail_mass(int last) const {
    double s = 0.0;
    for (int n = std::max(0, dim() - last); n < dim(); ++n) s += std::norm(amps_[n]);
    return s;
}

DensityMatrix DensityMatrix::make(FockSpace s, CMat m, const Tolerances& tol) {
    DensityMatrix rho = trusted(s, std::move(m));
    rho.validate(tol);
    return rho;
}

DensityMatrix DensityMatrix::trusted(FockSpace s, CMat m) {
    if (m.rows() != s.dim || m.cols() != s.dim)
        throw DimensionMismatch("DensityMatrix: matrix does not match space");
    return DensityMatrix(s, std::move(m));
}

DensityMatrix DensityMatrix::from_state(const StateVector& psi) {
    const int n = psi.dim();
    CMat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = psi.amp(i) * std::conj(psi.amp(j));
    return DensityMatrix(psi.space(), std::move(m));
}

void DensityMatrix::validate(const Tolerances& tol) const {
    double h = mat_.hermiticity_defect();
    if (h > tol.hermiticity)
        throw NotHermitian("density matrix hermiticity defect " + std::to_string(h));
    double tr = std::abs(mat_.trace() - cplx(1.0));
    if (tr > tol.trace)
        throw NormalizationError("density matrix trace defect " + std::to_string(tr));
    double mn = min_eigenvalue();
    if (mn < -tol.psd)
        throw PositivityViolation("density matrix min eigenvalue " + std::to_string(mn));
}

double DensityMatrix::min_eigenvalue() const {
    return linalg::eigh(mat_).w.front();
}

Operator annihilation_op(FockSpace s) {
    CMat a(s.dim, s.dim);
    for (int n = 1; n < s.dim; ++n) a(n - 1, n) = std::sqrt(double(n));
    return Operator(s, std::move(a));
}

Operator creation_op(FockSpace s) { return Operator(s, annihilation_op(s).mat.dagger()); }

Operator number_op(FockSpace s) {
    CMat n(s.dim, s.dim);
    for (int k = 0; k < s.dim; ++k) n(k, k) = double(k);
    return Operator(s, std::move(n));
}

Operator position_op(FockSpace s) {
    CMat a = annihilation_op(s).mat;
    CMat x = a + a.dagger();
    x *= cplx(1.0 / std::sqrt(2.0));
    return Operator(s, std::move(x));
}

Operator displacement_op(FockSpace s, cplx alpha, const Tolerances& tol) {
    double tail = coherent_tail_mass(alpha, s.dim);
    if (tail > tol.tail_mass && tol.strict)
        throw TruncationError("displacement: coherent tail mass " + std::to_string(tail) +
                              " at dim " + std::to_string(s.dim));
    return Operator(s, kern::displacement_matrix(s.dim, alpha));
}

Operator squeeze_op(FockSpace s, cplx zeta, const Tolerances& tol) {
    double tail = squeezed_vacuum_tail(std::abs(zeta), s.dim);
    if (tail > tol.tail_mass && tol.strict)
        throw TruncationError("squeeze: squeezed-vacuum tail mass " + std::to_string(tail) +
                              " at dim " + std::to_string(s.dim));
    CMat a = annihilation_op(s).mat;
    CMat a2 = kern::gemm(a, a);
    CMat gen = 0.5 * (std::conj(zeta) * a2 - zeta * a2.dagger());
    return Operator(s, linalg::expm(gen));
}

Operator cubic_phase_op(FockSpace s, double gamma) {
    // exp(-i gamma x^3) built spectrally: the truncated position operator is
    // tridiagonal, so U = Z exp(-i gamma w^3) Z^T with Z real orthogonal. This
    // is exactly unitary at every dimension, unlike a Pade exponential of the
    // truncated cube.
    const int n = s.dim;
    std::vector<double> off(n - 1);
    for (int k = 1; k < n; ++k) off[k - 1] = std::sqrt(k / 2.0);
    linalg::EigTridiag e = linalg::eig_tridiag(std::vector<double>(n, 0.0), std::move(off));
    std::vector<cplx> phase(n);
    for (int k = 0; k < n; ++k)
        phase[k] = std::exp(cplx(0.0, -gamma * e.w[k] * e.w[k] * e.w[k]));
    CMat u(n, n);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            cplx c = phase[k] * e.z[size_t(i) * n + k];
            for (int j = 0; j < n; ++j) u(i, j) += c * e.z[size_t(j) * n + k];
        }
    return Operator(s, std::move(u));
}

linalg::EigH eigendecompose_hermitian(const Operator& op) {
    double h = op.mat.hermiticity_defect();
    if (h > 1e-10)
        throw NotHermitian("eigendecompose: hermiticity defect " + std::to_string(h));
    return linalg::eigh(op.mat);
}

Operator tensor_product(const Operator& a, const Operator& b) {
    FockSpace s(a.space.dim * b.space.dim);
    return Operator(s, kern::kron(a.mat, b.mat));
}

StateVector tensor_product(const StateVector& a, const StateVector& b) {
    FockSpace s(a.dim() * b.dim());
    CVec v(size_t(s.dim));
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < b.dim(); ++j) v[size_t(i) * b.dim() + j] = a.amp(i) * b.amp(j);
    return StateVector::normalized(s, std::move(v));
}

DensityMatrix partial_trace_second(const DensityMatrix& rho, int dim_a, int dim_b) {
    if (rho.dim() != dim_a * dim_b)
        throw DimensionMismatch("partial_trace_second: dim != dim_a * dim_b");
    CMat r(dim_a, dim_a);
    for (int i = 0; i < dim_a; ++i)
        for (int j = 0; j < dim_a; ++j) {
            cplx s = 0.0;
            for (int k = 0; k < dim_b; ++k) s += rho.mat()(i * dim_b + k, j * dim_b + k);
            r(i, j) = s;
        }
    return DensityMatrix::trusted(FockSpace(dim_a), std::move(r));
}

cplx expectation(const StateVector& psi, const Operator& op) {
    require_same(psi.space(), op.space, "expectation");
    cplx s = 0.0;
    for (int i = 0; i < psi.dim(); ++i) {
        cplx row = 0.0;
        for (int j = 0; j < psi.dim(); ++j) row += op.mat(i, j) * psi.amp(j);
        s += std::conj(psi.amp(i)) * row;
    }
    return s;
}

cplx expectation(const DensityMatrix& rho, const Operator& op) {
    require_same(rho.space(), op.space, "expectation");
    cplx s = 0.0;
    for (int i = 0; i < rho.dim(); ++i)
        for (int j = 0; j < rho.dim(); ++j) s += rho.mat()(i, j) * op.mat(j, i);
    return s;
}

double coherent_tail_mass(cplx alpha, int dim) {
    const double x = std::norm(alpha);
    if (x == 0.0) return 0.0;
    // sum_{n >= dim} Poisson(x)_n, in log space; geometric bound once n >> x.
    double s = 0.0;
    for (int n = dim; n < dim + 512; ++n) {
        double lt = n * std::log(x) - std::lgamma(n + 1.0) - x;
        double t = std::exp(lt);
        s += t;
        if (n > x && t < 1e-18 * (s + 1e-300)) break;
    }
    return s;
}

double squeezed_vacuum_tail(double r, int dim) {
    if (r == 0.0) return 0.0;
    const double th = std::tanh(std::abs(r));
    const double lc = std::log(std::cosh(std::abs(r)));
    double s = 0.0;
    for (int k = (dim + 1) / 2; k < (dim + 1) / 2 + 512; ++k) {
        // |c_{2k}|^2 = (2k)! / (2^k k!)^2 tanh^{2k} r / cosh r
        double lt = std::lgamma(2.0 * k + 1.0) - 2.0 * (k * std::log(2.0) + std::lgamma(k + 1.0)) +
                    2.0 * k * std::log(th) - lc;
        double t = std::exp(lt);
        s += t;
        if (t < 1e-18 * (s + 1e-300)) break;
    }
    return s;
}

double unitarity_defect(const Operator& op, int keep) {
    CMat gram = kern::gemm(op.mat, op.mat, 'C', 'N');
    double m = 0.0;
    keep = std::min(keep, op.space.dim);
    for (int i = 0; i < keep; ++i)
        for (int j = 0; j < keep; ++j) {
            cplx want = (i == j) ? 1.0 : 0.0;
            m = std::max(m, std::abs(gram(i, j) - want));
        }
    return m;
}

}  // namespace dephasim
