#pragma once

#include <vector>

#include "dephasim/fock.hpp"

namespace dephasim {

// Uniform polar grid beta = r e^{i theta}. Radii run from 0 to r_max
// inclusive (trapezoid-ready); angles run over [0, 2pi) exclusive.
struct PhaseSpaceGrid {
    double r_max;
    int n_radial;
    int n_angular;

    PhaseSpaceGrid(double rmax, int nr, int na);
    double radius(int i) const { return r_max * i / (n_radial - 1); }
    double angle(int j) const { return 2.0 * 3.14159265358979323846 * j / n_angular; }
    double dtheta() const { return 2.0 * 3.14159265358979323846 / n_angular; }
};

struct WignerField {
    PhaseSpaceGrid grid;
    std::vector<double> values;   // row-major n_radial x n_angular

    double value(int i, int j) const { return values[size_t(i) * grid.n_angular + j]; }
};

// W(beta) = (2/pi) <parity around beta>, evaluated by the Fock-basis mode sum,
// which is exact for the truncated state at every beta (the per-coherence
// radial factors are computed directly, never through a truncated
// displacement matrix).
double wigner_point(const DensityMatrix& rho, cplx beta);

// Field evaluation over the grid; |W| <= 2/pi is asserted (NumericalFailure on
// violation, which would mean broken radial recurrences, not bad input).
WignerField wigner_grid(const DensityMatrix& rho, const PhaseSpaceGrid& grid);

// Total integral of W over the plane under the same radial trapezoid rule the
// marginal uses. 1 within discretization error on adequate grids.
double field_normalization(const WignerField& field);

// Phase distribution P(theta) = (1/2) integral of W d(r^2), trapezoid in r^2
// on the field's radial grid. NormalizationError if sum P dtheta misses 1 by
// more than 1e-6, i.e. the grid under-resolves or under-covers the state.
std::vector<double> angular_marginal(const WignerField& field);

// angular_marginal with the radial resolution raised until the normalization
// certificate passes (n_radial from 2048 doubling to 32768).
std::vector<double> converged_angular_marginal(const DensityMatrix& rho, double r_max,
                                               int n_angular);

// Nonclassicality indicator: integral of |W| minus 1.
double negativity_volume(const WignerField& field);

// max_theta |P(theta) - 1/(2pi)|
double uniformity_defect(const std::vector<double>& marginal);

// 1 - |first circular moment|; 0 for a delta, 1 - 1/(2pi)*... for uniform
double circular_variance(const std::vector<double>& marginal);

// Residual of the angular diffusion law in rescaled time tau = kappa*t. The
// Fock coherence at offset d decays like exp(-tau d^2/2) while the angular
// mode e^{i d theta} differentiates to -d^2, so the law is
// dW/dtau = (1/2) d^2W/dtheta^2, and likewise for the marginal. The residual
// is max|centered difference - (1/2) spectral second derivative| over the
// grid, relative to the right-hand side's maximum; 0 when both sides vanish
// (phase-symmetric states). The spectral derivative is a discrete Fourier
// transform over the periodic angular grid.
double diffusion_residual_wigner(const DensityMatrix& rho0, double kappa_t, double dt,
                                 const PhaseSpaceGrid& grid);
double diffusion_residual_marginal(const DensityMatrix& rho0, double kappa_t, double dt,
                                   const PhaseSpaceGrid& grid);

// Scans the state's radial mode envelope outward and places r_max where the
// Wigner bound falls below 1e-10, so the grid covers the support.
PhaseSpaceGrid default_grid_for(const DensityMatrix& rho, int n_radial = 256,
                                int n_angular = 256);

}  // namespace dephasim
