#include "dephasim/channel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dephasim/kernels.hpp"
#include "dephasim/linalg.hpp"

namespace dephasim {

namespace {

// Applies a decay mask that depends only on |n - m|.
DensityMatrix mask_apply(const DensityMatrix& rho, const std::vector<double>& factor) {
    const int dim = rho.space().dim;
    CMat out(dim, dim);
    for (int n = 0; n < dim; ++n)
        for (int m = 0; m < dim; ++m) out(n, m) = factor[std::abs(n - m)] * rho.mat()(n, m);
    return DensityMatrix::trusted(rho.space(), std::move(out));
}

}  // namespace

int default_kraus_terms(int dim, double kappa_t) {
    const double n = dim - 1;
    return 1 + int(std::ceil(kappa_t * n * n + 8.0 * std::sqrt(kappa_t) * n + 16.0));
}

const char* representation_name(Representation r) {
    switch (r) {
        case Representation::ClosedForm: return "closed";
        case Representation::Kraus: return "kraus";
        case Representation::Lindblad: return "lindblad";
        case Representation::PhaseAverage: return "phase-average";
    }
    return "?";
}

Representation representation_from_name(std::string_view name) {
    for (Representation r : {Representation::ClosedForm, Representation::Kraus,
                             Representation::Lindblad, Representation::PhaseAverage})
        if (name == representation_name(r)) return r;
    throw ConfigError("unknown channel representation '" + std::string(name) + "'");
}

CMat lindblad_rhs(const DensityMatrix& rho, double kappa) {
    const int dim = rho.space().dim;
    CMat out(dim, dim);
    for (int n = 0; n < dim; ++n)
        for (int m = 0; m < dim; ++m) {
            const double d = double(n) - double(m);
            out(n, m) = -0.5 * kappa * d * d * rho.mat()(n, m);
        }
    return out;
}

DensityMatrix integrate_master_equation(const DensityMatrix& rho0, double kappa_t, int steps) {
    if (steps < 1) throw ConfigError("steps must be >= 1");
    if (kappa_t < 0) throw ConfigError("kappa_t must be nonnegative");
    const int dim = rho0.space().dim;
    const double h = kappa_t / steps;

    // One classical 4th-order step of rho' = -(d^2/2) rho multiplies each
    // element by R(z) = 1 + z + z^2/2 + z^3/6 + z^4/24 at z = -d^2 h / 2; the
    // factor loop below is that recursion applied steps times.
    std::vector<double> factor(dim, 1.0);
    for (int d = 1; d < dim; ++d) {
        const double z = -0.5 * double(d) * double(d) * h;
        const double r = 1.0 + z * (1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0)));
        double f = 1.0;
        for (int s = 0; s < steps; ++s) f *= r;
        factor[d] = f;
    }

    CMat out(dim, dim);
    for (int n = 0; n < dim; ++n)
        for (int m = 0; m < dim; ++m) {
            // re-Hermitize: average the element with its mirror's conjugate
            cplx v = 0.5 * (rho0.mat()(n, m) + std::conj(rho0.mat()(m, n)));
            out(n, m) = factor[std::abs(n - m)] * v;
        }
    cplx tr = out.trace();
    if (std::abs(tr) < 1e-300) throw NumericalFailure("integrated state lost all trace");
    out *= cplx(1.0) / tr;

    DensityMatrix result = DensityMatrix::trusted(rho0.space(), std::move(out));
    const double lowest = result.min_eigenvalue();
    if (lowest < -1e-8)
        throw PositivityViolation("integrated state has eigenvalue " + std::to_string(lowest));
    return result;
}

DensityMatrix integrate_master_equation(const DensityMatrix& rho0, double kappa_t) {
    if (kappa_t == 0.0) return rho0;
    const int dim = rho0.space().dim;
    const double lambda_max = 0.5 * double(dim - 1) * double(dim - 1);
    // keep |z| <= 2 at the stiffest element so every refinement is stable
    long steps = std::max<long>(16, long(std::ceil(kappa_t * lambda_max / 2.0)));
    const long kCap = 1L << 20;
    DensityMatrix prev = integrate_master_equation(rho0, kappa_t, int(std::min(steps, kCap)));
    while (steps < kCap) {
        steps = std::min(steps * 2, kCap);
        DensityMatrix next = integrate_master_equation(rho0, kappa_t, int(steps));
        if (max_abs_diff(next.mat(), prev.mat()) < 1e-10) return next;
        prev = std::move(next);
    }
    throw NumericalFailure("master-equation integration did not settle within 2^20 steps");
}

DensityMatrix apply_kraus(const DensityMatrix& rho0, const ChannelParam& param) {
    const int dim = rho0.space().dim;
    CMat gram = kern::kraus_gram(dim, param.kappa_t, param.kraus_terms);
    double defect = 0;
    for (int n = 0; n < dim; ++n) defect = std::max(defect, std::abs(gram(n, n).real() - 1.0));
    if (defect > 1e-10)
        throw KrausTruncationError("completeness defect " + std::to_string(defect) + " with " +
                                   std::to_string(param.kraus_terms) + " terms");
    CMat out(dim, dim);
    for (int n = 0; n < dim; ++n)
        for (int m = 0; m < dim; ++m) out(n, m) = gram(n, m) * rho0.mat()(n, m);
    return DensityMatrix::trusted(rho0.space(), std::move(out));
}

DensityMatrix apply_closed_form(const DensityMatrix& rho0, double kappa_t) {
    if (kappa_t < 0) throw ConfigError("kappa_t must be nonnegative");
    const int dim = rho0.space().dim;
    std::vector<double> factor(dim);
    for (int d = 0; d < dim; ++d) factor[d] = std::exp(-0.5 * kappa_t * double(d) * double(d));
    return mask_apply(rho0, factor);
}

int default_quad_points(int dim, double kappa_t) {
    // the largest retained phase frequency is c = sqrt(2 kappa_t)(dim-1); the
    // rule's node spacing ~pi/sqrt(2q) must resolve that oscillation, so q has
    // to grow like c^2/2, with margin for the certificate
    const double c = std::sqrt(2.0 * kappa_t) * (dim - 1);
    return std::max(64, int(std::ceil(0.5 * c * c + 2.0 * c)) + 32);
}

DensityMatrix apply_phase_average(const DensityMatrix& rho0, double kappa_t, int quad_points) {
    if (quad_points < 64) throw QuadratureError("quad_points must be >= 64");
    const int dim = rho0.space().dim;
    auto [n1, w1] = linalg::gauss_hermite(quad_points);
    auto [n2, w2] = linalg::gauss_hermite(2 * quad_points);
    std::vector<double> f1 = kern::phase_avg_factors(dim, kappa_t, n1, w1);
    std::vector<double> f2 = kern::phase_avg_factors(dim, kappa_t, n2, w2);
    double max_el = 0, drift = 0;
    for (int n = 0; n < dim; ++n)
        for (int m = 0; m < dim; ++m)
            max_el = std::max(max_el, std::abs(rho0.mat()(n, m)));
    for (int d = 0; d < dim; ++d) drift = std::max(drift, std::abs(f1[d] - f2[d]) * max_el);
    if (drift > 1e-8)
        throw QuadratureError("doubling the rule moved elements by " + std::to_string(drift) +
                              " at " + std::to_string(quad_points) + " points");
    return mask_apply(rho0, f2);
}

DensityMatrix apply_channel(const DensityMatrix& rho0, double kappa_t, Representation rep) {
    const int dim = rho0.space().dim;
    switch (rep) {
        case Representation::ClosedForm:
            return apply_closed_form(rho0, kappa_t);
        case Representation::Kraus:
            return apply_kraus(rho0, ChannelParam(kappa_t, default_kraus_terms(dim, kappa_t)));
        case Representation::Lindblad:
            return integrate_master_equation(rho0, kappa_t);
        case Representation::PhaseAverage:
            return apply_phase_average(rho0, kappa_t, default_quad_points(dim, kappa_t));
    }
    throw ConfigError("unknown channel representation");
}

double l1_coherence(const DensityMatrix& rho) {
    const int dim = rho.space().dim;
    double s = 0;
    for (int n = 0; n < dim; ++n)
        for (int m = 0; m < dim; ++m)
            if (n != m) s += std::abs(rho.mat()(n, m));
    return s;
}

}  // namespace dephasim
