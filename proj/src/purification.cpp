#include "dephasim/purification.hpp"

#include <cmath>
#include <string>

namespace dephasim {

namespace {

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

// e^{-|beta|^2/2} beta^k / sqrt(k!) without factorial overflow
CVec coherent_branch(cplx beta, int dim) {
    CVec c(dim);
    c[0] = std::exp(-0.5 * std::norm(beta));
    for (int k = 1; k < dim; ++k) c[k] = c[k - 1] * beta / std::sqrt(double(k));
    return c;
}

int mech_cutoff(double beta_max) {
    for (int dim = 4; dim <= 4096; dim += dim / 2)
        if (coherent_tail_mass(beta_max, dim) <= 1e-12) return dim;
    throw TruncationError("optomech: mechanical branch amplitude " + std::to_string(beta_max) +
                          " needs more than 4096 levels");
}

}  // namespace

LambdaParam lambda_param(const OptomechParams& p) {
    const double half = 0.5 * p.omega_m * p.t;
    const cplx lam = p.g * p.t * sinc(half) * std::exp(cplx{0.0, -half});
    return {lam, std::abs(lam)};
}

TwoModeState optomech_evolve(const StateVector& psi_c, const OptomechParams& p, int dim_m) {
    const int dim_c = psi_c.dim();
    const LambdaParam lam = lambda_param(p);
    const double wmt = p.omega_m * p.t;
    const double kerr = (p.g * p.g / (p.omega_m * p.omega_m)) * (wmt - std::sin(wmt));

    CVec amps(size_t(dim_c) * dim_m, 0.0);
    double branch_norm = 0.0;
    for (int n = 0; n < dim_c; ++n) {
        if (std::abs(psi_c.amp(n)) == 0.0) continue;
        const cplx beta = cplx{0.0, -1.0} * lam.lambda * double(n);
        const double phi = -p.omega_c * n * p.t + kerr * n * n;
        const cplx head = psi_c.amp(n) * std::exp(cplx{0.0, phi});
        const CVec branch = coherent_branch(beta, dim_m);
        double b2 = 0.0;
        for (int k = 0; k < dim_m; ++k) {
            amps[size_t(n) * dim_m + k] = head * branch[k];
            b2 += std::norm(branch[k]);
        }
        branch_norm += std::norm(psi_c.amp(n)) * b2;
    }
    if (std::abs(branch_norm - 1.0) > 1e-10)
        throw TruncationError("optomech: mechanical cutoff leaks norm " +
                              std::to_string(1.0 - branch_norm));
    return {StateVector::normalized(FockSpace(dim_c * dim_m), std::move(amps)), dim_c, dim_m,
            lam};
}

TwoModeState optomech_evolve(const StateVector& psi_c, const OptomechParams& p) {
    const double beta_max = lambda_param(p).abs_lambda * (psi_c.dim() - 1);
    return optomech_evolve(psi_c, p, mech_cutoff(beta_max));
}

DensityMatrix reduced_cavity_state(const StateVector& two_mode, int dim_c, int dim_m) {
    if (two_mode.dim() != dim_c * dim_m)
        throw DimensionMismatch("reduced_cavity_state: state is not dim_c x dim_m");
    const CVec& a = two_mode.amps();
    CMat rho(dim_c, dim_c);
    for (int n = 0; n < dim_c; ++n)
        for (int m = 0; m <= n; ++m) {
            cplx acc = 0.0;
            for (int k = 0; k < dim_m; ++k)
                acc += a[size_t(n) * dim_m + k] * std::conj(a[size_t(m) * dim_m + k]);
            rho(n, m) = acc;
            rho(m, n) = std::conj(acc);
        }
    return DensityMatrix::trusted(FockSpace(dim_c), std::move(rho));
}

double generator_variance(const StateVector& psi_c, const OptomechParams& p) {
    const double pref = p.t * sinc(0.5 * p.omega_m * p.t);
    return pref * pref * photon_stats(psi_c).mean_n2;
}

double purified_qfi_lambda(const StateVector& psi_c) { return photon_stats(psi_c).mean_n2; }

double qcrb(const StateVector& psi_c, const OptomechParams& p, QcrbTarget target) {
    const double info = target == QcrbTarget::G ? generator_variance(psi_c, p)
                                                : purified_qfi_lambda(psi_c);
    if (info <= 0.0)
        throw ZeroInformation(target == QcrbTarget::G
                                  ? "no information about g (vacuum probe or decoupling revival)"
                                  : "no information about |lambda| (vacuum probe)");
    return 1.0 / info;
}

}  // namespace dephasim
