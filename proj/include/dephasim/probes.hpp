#pragma once

#include <string_view>

#include "dephasim/fock.hpp"

namespace dephasim {

// Probe state families. Superpositions carry equal unit weights before the
// final normalization; Cat always means the even combination.
//
//   Coherent        |alpha>
//   Cat             |alpha> + |-alpha>
//   Kitten          sum_{k=0..3} |i^k alpha>          (support on n = 0 mod 4)
//   SqCat           S(r) (|alpha> + |-alpha>)
//   SS              S(r)|0> + S(-r)|0>
//   SqCS            S(r)|alpha>
//   SSKitten        (S(r) + S(-r)) sum_{k=0..3} |i^k alpha>
//   CbPhS           exp(-i gamma x^3)|0>
//   ModSSW          sum_{n=0..s} (n+q)^{-p} |n>       (finite support by design)
//   Fock            |fock_n>
//   SqueezedVacuum  S(r)|0>
enum class ProbeFamily {
    Coherent,
    Cat,
    Kitten,
    SqCat,
    SS,
    SqCS,
    SSKitten,
    CbPhS,
    ModSSW,
    Fock,
    SqueezedVacuum,
};

const char* family_name(ProbeFamily f);
ProbeFamily family_from_name(std::string_view name);   // ConfigError if unknown

// Parameter bundle for every family; only the fields the family reads matter.
struct ProbeSpec {
    ProbeFamily family = ProbeFamily::Coherent;
    cplx alpha{1.0, 0.0};
    double r = 0.5;
    double gamma = 0.1;
    int s = 20;
    double q = 1.0;
    double p = 1.0;
    int fock_n = 1;
};

// Builds the normalized probe in the given space.
// In strict mode, families with unbounded Fock support must leave tail mass
// (last four levels) below tol.tail_mass or a TruncationError is raised; the
// default mode accepts the renormalized truncation quietly, since some
// families (notably CbPhS, whose Fock tail decays sub-exponentially) cannot
// meet tight tail bounds at workable dimensions. Fock and ModSSW are exactly
// representable and always require fock_n < dim resp. s < dim.
// DegenerateState if the pre-normalization norm is below tol.state_norm.
StateVector build_probe(FockSpace space, const ProbeSpec& spec, const Tolerances& tol);

struct PhotonStats {
    double mean_n;      // <n>
    double mean_n2;     // <n^2>
    double var_n;       // <n^2> - <n>^2
    double agarwal_q;   // var_n / mean_n, NaN when mean_n < 1e-12
};

PhotonStats photon_stats(const StateVector& psi);
PhotonStats photon_stats(const DensityMatrix& rho);

enum class FreeParam { Alpha, R, Gamma };

// Adjusts one parameter of the template (magnitude only; the phase of alpha is
// kept) until the built probe's <n> matches the target to 1e-8, by bisection
// on an expanding bracket. The Fock space is re-chosen adaptively per
// evaluation. BracketError if the target is unreachable or <n> is not monotone
// over the bracket.
ProbeSpec solve_param_for_mean_n(const ProbeSpec& templ, FreeParam which, double target_mean_n,
                                 const Tolerances& tol, int max_dim = 512);

// Same solve at one fixed dimension: matches the <n> of the state as built in
// that space, which is what a sweep running at a uniform dimension needs.
ProbeSpec solve_param_for_mean_n(const ProbeSpec& templ, FreeParam which, double target_mean_n,
                                 FockSpace space, const Tolerances& tol);

// Smallest dimension from a fixed ladder at which the probe builds cleanly,
// has tail mass below 1e-12, and whose photon moments agree with the next
// ladder size to 1e-9 relative. TruncationError if none qualifies.
int choose_dim(const ProbeSpec& spec, const Tolerances& tol, int max_dim = 512);

}  // namespace dephasim
