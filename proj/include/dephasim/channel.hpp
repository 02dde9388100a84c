#pragma once

#include "dephasim/fock.hpp"

namespace dephasim {

// Dephasing strength as the dimensionless product kappa*t, plus the Kraus
// series truncation order. kappa_t coincides with |lambda|^2 of the two-mode
// purification (see purification.hpp).
struct ChannelParam {
    double kappa_t = 0.0;
    int kraus_terms = 1;

    ChannelParam() = default;
    ChannelParam(double kt, int terms) : kappa_t(kt), kraus_terms(terms) {
        if (kt < 0) throw ConfigError("kappa_t must be nonnegative");
        if (terms < 1) throw ConfigError("kraus_terms must be >= 1");
    }
};

// Poisson-tail bound on the dominant Kraus index (mean kappa_t n^2 at the top
// retained level, plus eight standard deviations and a constant floor).
int default_kraus_terms(int dim, double kappa_t);

enum class Representation { ClosedForm, Kraus, Lindblad, PhaseAverage };
const char* representation_name(Representation r);
Representation representation_from_name(std::string_view name);   // ConfigError

// Generator of the dephasing semigroup: (kappa/2)(2 n rho n - n^2 rho - rho n^2),
// which in the Fock basis is the elementwise mask -(kappa/2)(n-m)^2 rho_nm.
// Traceless and Hermitian for Hermitian input.
CMat lindblad_rhs(const DensityMatrix& rho, double kappa);

// Classical fixed-step 4th-order integration of the master equation in
// rescaled time tau = kappa*t. Output is re-Hermitized and trace-renormalized.
// PositivityViolation if the result's lowest eigenvalue drops below -1e-8.
DensityMatrix integrate_master_equation(const DensityMatrix& rho0, double kappa_t, int steps);

// Step-halving driver: starts inside the integrator's stability region and
// doubles the step count until the output moves by less than 1e-10
// max-element, capped at 2^20 steps (NumericalFailure beyond the cap).
DensityMatrix integrate_master_equation(const DensityMatrix& rho0, double kappa_t);

// Truncated operator-sum representation with diagonal Kraus factors
// d_k(n) = sqrt((kappa_t)^k / k!) n^k exp(-kappa_t n^2 / 2).
// KrausTruncationError if the completeness defect max_n |sum_k d_k(n)^2 - 1|
// exceeds 1e-10.
DensityMatrix apply_kraus(const DensityMatrix& rho0, const ChannelParam& param);

// Exact Fock-basis decay mask rho_nm -> exp(-kappa_t (n-m)^2 / 2) rho_nm.
// Diagonal preserved exactly; reference implementation for the others.
DensityMatrix apply_closed_form(const DensityMatrix& rho0, double kappa_t);

// Average over Gaussian-distributed phase rotations exp(i n phi), evaluated by
// Gauss-Hermite quadrature on the real line (the distribution is not wrapped;
// the unwrapped form is what the other representations realize).
// quad_points >= 64; the rule is certified by doubling, QuadratureError if any
// element moves by more than 1e-8.
DensityMatrix apply_phase_average(const DensityMatrix& rho0, double kappa_t, int quad_points);
int default_quad_points(int dim, double kappa_t);

// Dispatch by representation; Kraus order and quadrature size use the
// defaults above.
DensityMatrix apply_channel(const DensityMatrix& rho0, double kappa_t, Representation rep);

// Sum of |rho_nm| over n != m.
double l1_coherence(const DensityMatrix& rho);

}  // namespace dephasim
