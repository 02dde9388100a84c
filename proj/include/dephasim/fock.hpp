#pragma once
#include <vector>

#include "dephasim/cmat.hpp"
#include "dephasim/linalg.hpp"
#include "dephasim/types.hpp"

namespace dephasim {

struct Operator {
    FockSpace space;
    CMat mat;

    Operator(FockSpace s, CMat m) : space(s), mat(std::move(m)) {
        if (mat.rows() != space.dim || mat.cols() != space.dim)
            throw DimensionMismatch("Operator: matrix does not match space");
    }
};

class StateVector {
  public:
    // Normalizes; throws DegenerateState if the norm is below tol.state_norm.
    static StateVector normalized(FockSpace s, CVec amps, const Tolerances& tol = {});

    const FockSpace& space() const { return space_; }
    const CVec& amps() const { return amps_; }
    cplx amp(int n) const { return amps_[n]; }
    int dim() const { return space_.dim; }

    // sum_{n >= dim-4} |c_n|^2, the truncation-health metric.
    double tail_mass(int last = 4) const;

  private:
    StateVector(FockSpace s, CVec a) : space_(s), amps_(std::move(a)) {}
    FockSpace space_;
    CVec amps_;
};

class DensityMatrix {
  public:
    // Validates hermiticity (1e-12), unit trace (1e-10) and spectrum
    // (min eigenvalue >= -1e-10).
    static DensityMatrix make(FockSpace s, CMat m, const Tolerances& tol = {});
    // Skips validation; for interior steps whose output is validated later.
    static DensityMatrix trusted(FockSpace s, CMat m);
    static DensityMatrix from_state(const StateVector& psi);

    const FockSpace& space() const { return space_; }
    const CMat& mat() const { return mat_; }
    CMat& mat() { return mat_; }
    int dim() const { return space_.dim; }

    void validate(const Tolerances& tol = {}) const;
    double min_eigenvalue() const;

  private:
    DensityMatrix(FockSpace s, CMat m) : space_(s), mat_(std::move(m)) {}
    FockSpace space_;
    CMat mat_;
};

// Ladder and quadrature operators: <n-1|a|n> = sqrt(n), x = (a + a^dag)/sqrt(2).
Operator annihilation_op(FockSpace s);
Operator creation_op(FockSpace s);
Operator number_op(FockSpace s);
Operator position_op(FockSpace s);

// D(alpha) from the associated-Laguerre closed form (the projection of the
// exact infinite-dimensional unitary). Precondition: the coherent tail mass
// of D(alpha)|0> at the cutoff stays under tol.tail_mass (strict mode throws
// TruncationError, otherwise the defect is available via column norms).
Operator displacement_op(FockSpace s, cplx alpha, const Tolerances& tol = {});

// S(zeta) = exp((conj(zeta) a^2 - zeta a^dag^2)/2), exponential of the
// truncated generator (exactly unitary on the retained space).
Operator squeeze_op(FockSpace s, cplx zeta, const Tolerances& tol = {});

// exp(-i gamma x^3). Valid for gamma small enough that the action on the
// states of interest converges under cutoff doubling.
Operator cubic_phase_op(FockSpace s, double gamma);

// Throws NotHermitian if the defect exceeds 1e-10.
linalg::EigH eigendecompose_hermitian(const Operator& op);

Operator tensor_product(const Operator& a, const Operator& b);
StateVector tensor_product(const StateVector& a, const StateVector& b);

// Trace over the second (minor-index) factor of a dimA*dimB density matrix.
DensityMatrix partial_trace_second(const DensityMatrix& rho, int dim_a, int dim_b);

cplx expectation(const StateVector& psi, const Operator& op);
cplx expectation(const DensityMatrix& rho, const Operator& op);

// Poisson tail sum_{n >= dim} e^{-|a|^2} |a|^(2n) / n! of a coherent state.
double coherent_tail_mass(cplx alpha, int dim);
// Analytic tail sum_{n >= dim} |<n|S(r e^{i phi})|0>|^2 of squeezed vacuum.
double squeezed_vacuum_tail(double r, int dim);

// Unitarity defect max |(A^dag A - I)_{nm}| over the leading keep x keep block.
double unitarity_defect(const Operator& op, int keep);

}  // namespace dephasim
