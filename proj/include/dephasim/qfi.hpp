#pragma once

#include <functional>

#include "dephasim/fock.hpp"

namespace dephasim {

// Diagnostics attached to every SLD evaluation. discarded_weight sums
// |2 (V^dag drho V)_kl| over the eigenvalue pairs the floor removed;
// degenerate_warning flags it when that exceeds 1e-6 (the result is then
// floor-sensitive and should be treated with care, but is still returned).
struct SldInfo {
    double eig_floor = 0.0;
    double discarded_weight = 0.0;
    double residual = 0.0;  // max |rho L + L rho - 2 drho| on the retained subspace
    bool degenerate_warning = false;
};

struct SldResult {
    Operator l;
    SldInfo info;
};

struct QfiResult {
    double param_value;     // |lambda|
    double qfi_sld;
    double qfi_bures;
    double purified_bound;  // <n^2> of the probe
    SldInfo sld_info;
    double bures_step;
};

// Analytic derivative of the dephased family at |lambda|:
// d rho_nm / d|lambda| = -|lambda| (n-m)^2 e^{-|lambda|^2 (n-m)^2 / 2} rho_nm(0).
// rho0 is the undephased probe. Hermitian and traceless by construction.
CMat drho_dlambda(const DensityMatrix& rho0, double abs_lambda);

// Same family parametrized by kappa t: d rho_nm / d(kt) = -((n-m)^2/2) rho_nm(kt).
CMat drho_dkappa_t(const DensityMatrix& rho0, double kappa_t);

// L = sum_kl 2 <k|drho|l> / (p_k + p_l) |k><l| over the eigenpairs of rho,
// pairs with p_k + p_l <= eig_floor dropped. The defining-equation residual
// rho L + L rho = 2 drho is evaluated in the eigenbasis with dropped pairs
// masked; it stays below 1e-7 for valid inputs.
SldResult sld_operator(const DensityMatrix& rho, const CMat& drho, double eig_floor);

// F_Q = Tr[rho L^2] for estimating |lambda| (> 0 required: the parametrization
// is rank-degenerate at the origin). floor_rel scales the eigenvalue floor by
// Tr rho.
double qfi_sld(const DensityMatrix& rho0, double abs_lambda, double floor_rel = 1e-12);

// Same information in the kappa t parametrization, computed through its own
// derivative; equals qfi_sld / (2 |lambda|)^2 by the chain rule.
double qfi_sld_kappa(const DensityMatrix& rho0, double kappa_t, double floor_rel = 1e-12);

// Square-root fidelity Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)), in [0, 1 + 1e-9].
double uhlmann_fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2);

// Bures finite-difference estimate 8(1 - F(rho(l-s), rho(l+s))) / (2s)^2,
// Richardson-extrapolated over {step, step/2}. StepTooLarge when the pair
// disagrees by more than 1e-3 relative. Preconditions: step > 0 and
// abs_lambda - step >= 0.
double qfi_bures(const DensityMatrix& rho0, double abs_lambda, double step);

double default_bures_step(double abs_lambda);  // max(1e-3, 1e-2 |lambda|)

// One sweep point: SLD and Bures values at |lambda| plus the purified
// reference <n^2> of the probe.
QfiResult qfi_point(const DensityMatrix& rho0, double abs_lambda, double floor_rel = 1e-12);

// Error-propagation sensitivity of the observable's mean to kappa t:
// delta kappa = std(f) / |d<f>/d(kt)|, the derivative by centered difference.
// ZeroSlope if the observable's mean does not move (slope below 1e-14).
double sensitivity(const std::function<DensityMatrix(double)>& rho_fn, const Operator& observable,
                   double kappa_t, double step);

}  // namespace dephasim
