#pragma once
#include <complex>
#include <stdexcept>
#include <string>

namespace dephasim {

using cplx = std::complex<double>;

struct DephasimError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define DEPHASIM_ERROR(Name)                        \
    struct Name : DephasimError {                   \
        using DephasimError::DephasimError;         \
    }

DEPHASIM_ERROR(DimensionMismatch);
DEPHASIM_ERROR(NotHermitian);
DEPHASIM_ERROR(TruncationError);
DEPHASIM_ERROR(KrausTruncationError);
DEPHASIM_ERROR(PositivityViolation);
DEPHASIM_ERROR(QuadratureError);
DEPHASIM_ERROR(NormalizationError);
DEPHASIM_ERROR(DegenerateState);
DEPHASIM_ERROR(BracketError);
DEPHASIM_ERROR(ZeroInformation);
DEPHASIM_ERROR(StepTooLarge);
DEPHASIM_ERROR(ZeroSlope);
DEPHASIM_ERROR(NumericalFailure);
DEPHASIM_ERROR(ConfigError);

#undef DEPHASIM_ERROR

// Truncated Fock space dimension tag. Mixed-dimension arithmetic is rejected
// at operation boundaries with DimensionMismatch.
struct FockSpace {
    int dim = 0;

    explicit FockSpace(int d) : dim(d) {
        if (d < 2) throw DimensionMismatch("FockSpace dim must be >= 2, got " + std::to_string(d));
    }
    bool operator==(const FockSpace&) const = default;
};

inline void require_same(const FockSpace& a, const FockSpace& b, const char* what) {
    if (!(a == b))
        throw DimensionMismatch(std::string(what) + ": dims " + std::to_string(a.dim) +
                                " vs " + std::to_string(b.dim));
}

// Numerical contract knobs. Defaults are the pinned artifact-wide values;
// strict mode upgrades tail-mass warnings to TruncationError.
struct Tolerances {
    double hermiticity = 1e-12;
    double unitarity = 1e-9;
    double trace = 1e-10;
    double psd = 1e-10;        // min eigenvalue >= -psd
    double state_norm = 1e-12;
    double tail_mass = 1e-8;   // truncation warning threshold for operator preconditions
    bool strict = false;
};

}  // namespace dephasim
