#pragma once

#include "dephasim/fock.hpp"
#include "dephasim/probes.hpp"

namespace dephasim {

// Optomechanical coupling H = omega_c a^dag a + omega_m b^dag b
//                            + g a^dag a (b + b^dag), mechanical mode in vacuum.
struct OptomechParams {
    double g = 1.0;
    double omega_m = 1.0;
    double omega_c = 1.0;
    double t = 1.0;

    OptomechParams() = default;
    OptomechParams(double g_, double om, double oc, double t_)
        : g(g_), omega_m(om), omega_c(oc), t(t_) {
        if (!(omega_m > 0.0)) throw ConfigError("optomech: omega_m must be positive");
        if (!(t >= 0.0)) throw ConfigError("optomech: t must be non-negative");
    }
};

struct LambdaParam {
    cplx lambda;        // g t j0(omega_m t / 2) e^{-i omega_m t / 2}, j0(x) = sin(x)/x
    double abs_lambda;  // |lambda|; kappa t == |lambda|^2 links to the channel
};

// Removable singularity at t = 0 gives lambda = 0; |lambda| is continuous.
LambdaParam lambda_param(const OptomechParams& p);

// Evolved two-mode state, cavity-major layout (index n * dim_m + k). Solved in
// closed form per cavity level: H restricted to |n> is a displaced oscillator,
// so |n>|0> evolves to e^{i phi_n} |n>|beta_n> with
//   beta_n = -(g n / omega_m)(1 - e^{-i omega_m t})  (= -i lambda n),
//   phi_n  = -omega_c n t + (g^2 n^2 / omega_m^2)(omega_m t - sin(omega_m t)).
// The quadratic (Kerr) part of phi_n and the orientation of beta_n are fixed
// by the exact solution; they drop out of the reduced-state moduli, where only
// |<beta_m|beta_n>| = e^{-|lambda|^2 (n-m)^2 / 2} survives.
struct TwoModeState {
    StateVector state;
    int dim_c;
    int dim_m;
    LambdaParam lam;
};

// Mechanical cutoff chosen so every conditional coherent branch keeps its
// Poisson tail below 1e-12 (TruncationError beyond 4096 levels). The explicit
// dim_m overload exists for oracle comparisons that must share a cutoff.
TwoModeState optomech_evolve(const StateVector& psi_c, const OptomechParams& p);
TwoModeState optomech_evolve(const StateVector& psi_c, const OptomechParams& p, int dim_m);

// Trace over the mechanical mode. Accumulated directly from the amplitudes,
// never through the two-mode outer product. DimensionMismatch if the state
// length is not dim_c * dim_m.
DensityMatrix reduced_cavity_state(const StateVector& two_mode, int dim_c, int dim_m);

// Variance of the estimation generator
//   G = -t j0(omega_m t/2) a^dag a (b e^{-i omega_m t/2} + b^dag e^{i omega_m t/2})
// on psi_c with the mechanical mode in vacuum: (t j0)^2 <n^2>.
double generator_variance(const StateVector& psi_c, const OptomechParams& p);

// Fisher information of the purified family in |lambda|: <n^2> of the probe.
double purified_qfi_lambda(const StateVector& psi_c);

enum class QcrbTarget { G, AbsLambda };

// Lower bound on the estimator variance: 1/((t j0)^2 <n^2>) for g,
// 1/<n^2> for |lambda|. ZeroInformation when the information vanishes
// (vacuum probe, or a decoupling revival omega_m t = 2 pi k for g).
double qcrb(const StateVector& psi_c, const OptomechParams& p, QcrbTarget target);

}  // namespace dephasim
