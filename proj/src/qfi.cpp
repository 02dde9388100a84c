#include "dephasim/qfi.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "dephasim/channel.hpp"
#include "dephasim/kernels.hpp"
#include "dephasim/linalg.hpp"
#include "dephasim/probes.hpp"

namespace dephasim {

namespace {

CMat masked_family_derivative(const DensityMatrix& rho0, double kappa_t,
                              const std::function<double(int)>& weight) {
    const int dim = rho0.dim();
    CMat out(dim, dim);
    for (int n = 0; n < dim; ++n)
        for (int m = 0; m < dim; ++m) {
            const int d = n - m;
            const double decay = std::exp(-0.5 * kappa_t * d * d);
            out(n, m) = weight(d) * decay * rho0.mat()(n, m);
        }
    return out;
}

}  // namespace

CMat drho_dlambda(const DensityMatrix& rho0, double abs_lambda) {
    if (abs_lambda < 0.0) throw ConfigError("drho_dlambda: abs_lambda must be >= 0");
    const double kt = abs_lambda * abs_lambda;
    return masked_family_derivative(rho0, kt,
                                    [&](int d) { return -abs_lambda * double(d) * double(d); });
}

CMat drho_dkappa_t(const DensityMatrix& rho0, double kappa_t) {
    if (kappa_t < 0.0) throw ConfigError("drho_dkappa_t: kappa_t must be >= 0");
    return masked_family_derivative(rho0, kappa_t,
                                    [](int d) { return -0.5 * double(d) * double(d); });
}

SldResult sld_operator(const DensityMatrix& rho, const CMat& drho, double eig_floor) {
    if (drho.hermiticity_defect() > 1e-10)
        throw NotHermitian("sld_operator: drho is not Hermitian");
    const linalg::EigH eig = linalg::eigh(rho.mat());
    const int dim = rho.dim();

    // numerator in the eigenbasis: M = V^dag drho V
    const CMat m = kern::gemm(kern::gemm(eig.V, drho, 'C'), eig.V);

    CMat l_eig(dim, dim);
    SldInfo info;
    info.eig_floor = eig_floor;
    for (int k = 0; k < dim; ++k)
        for (int j = 0; j < dim; ++j) {
            const double pk = std::max(eig.w[k], 0.0);
            const double pj = std::max(eig.w[j], 0.0);
            if (pk + pj <= eig_floor) {
                info.discarded_weight += std::abs(2.0 * m(k, j));
            } else {
                l_eig(k, j) = 2.0 * m(k, j) / (pk + pj);
            }
        }
    info.degenerate_warning = info.discarded_weight > 1e-6;

    CMat l = kern::gemm(kern::gemm(eig.V, l_eig), eig.V, 'N', 'C');
    // re-hermitize against rounding drift from the two basis changes
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < i; ++j) {
            const cplx s = 0.5 * (l(i, j) + std::conj(l(j, i)));
            l(i, j) = s;
            l(j, i) = std::conj(s);
        }

    // defining equation, checked where the floor kept the pair
    CMat resid = kern::gemm(rho.mat(), l);
    resid += kern::gemm(l, rho.mat());
    resid -= drho * cplx{2.0};
    const CMat resid_eig = kern::gemm(kern::gemm(eig.V, resid, 'C'), eig.V);
    for (int k = 0; k < dim; ++k)
        for (int j = 0; j < dim; ++j) {
            const double pk = std::max(eig.w[k], 0.0);
            const double pj = std::max(eig.w[j], 0.0);
            if (pk + pj > eig_floor)
                info.residual = std::max(info.residual, std::abs(resid_eig(k, j)));
        }

    return {Operator(rho.space(), std::move(l)), info};
}

namespace {

double trace_rho_l2(const DensityMatrix& rho, const CMat& l) {
    return kern::gemm(kern::gemm(rho.mat(), l), l).trace().real();
}

}  // namespace

double qfi_sld(const DensityMatrix& rho0, double abs_lambda, double floor_rel) {
    if (!(abs_lambda > 0.0))
        throw ConfigError("qfi_sld: abs_lambda must be positive (rank change at the origin)");
    const double kt = abs_lambda * abs_lambda;
    const DensityMatrix rho = apply_closed_form(rho0, kt);
    const double floor = floor_rel * rho.mat().trace().real();
    const SldResult sld = sld_operator(rho, drho_dlambda(rho0, abs_lambda), floor);
    return trace_rho_l2(rho, sld.l.mat);
}

double qfi_sld_kappa(const DensityMatrix& rho0, double kappa_t, double floor_rel) {
    if (!(kappa_t > 0.0)) throw ConfigError("qfi_sld_kappa: kappa_t must be positive");
    const DensityMatrix rho = apply_closed_form(rho0, kappa_t);
    const double floor = floor_rel * rho.mat().trace().real();
    const SldResult sld = sld_operator(rho, drho_dkappa_t(rho0, kappa_t), floor);
    return trace_rho_l2(rho, sld.l.mat);
}

// The Bures finite differences below divide (1 - F) by s^2 with s ~ 5e-3,
// so F must be accurate to ~1e-11.  A double-precision eigensolve leaves
// ~1e-8 of noise in sum(sqrt(w)) (sqrt amplifies absolute eigenvalue error
// near zero), which is why the fidelity runs in compensated double-double
// arithmetic: pivoted Cholesky rho1 = L L^H, then F = sum sqrt(eig(L^H rho2 L))
// via cyclic Jacobi on the compressed rank-r matrix.  Inputs are exact
// doubles, so the result is good to ~1e-13 even for graded spectra.
namespace {

struct dd {
    double hi = 0.0, lo = 0.0;
};

dd two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

dd quick_two_sum(double a, double b) {
    const double s = a + b;
    return {s, b - (s - a)};
}

dd two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

dd dd_add(dd a, dd b) {
    const dd s = two_sum(a.hi, b.hi);
    const dd t = two_sum(a.lo, b.lo);
    dd r = quick_two_sum(s.hi, s.lo + t.hi);
    return quick_two_sum(r.hi, r.lo + t.lo);
}

dd dd_neg(dd a) { return {-a.hi, -a.lo}; }
dd dd_sub(dd a, dd b) { return dd_add(a, dd_neg(b)); }

dd dd_mul(dd a, dd b) {
    const dd p = two_prod(a.hi, b.hi);
    return quick_two_sum(p.hi, p.lo + a.hi * b.lo + a.lo * b.hi);
}

dd dd_scale(dd a, double b) {
    const dd p = two_prod(a.hi, b);
    return quick_two_sum(p.hi, p.lo + a.lo * b);
}

dd dd_div(dd a, dd b) {
    const double q1 = a.hi / b.hi;
    dd r = dd_sub(a, dd_scale(b, q1));
    const double q2 = r.hi / b.hi;
    r = dd_sub(r, dd_scale(b, q2));
    const double q3 = r.hi / b.hi;
    dd q = quick_two_sum(q1, q2);
    return dd_add(q, dd{q3, 0.0});
}

dd dd_sqrt(dd a) {
    if (a.hi <= 0.0) return {0.0, 0.0};
    const double x = std::sqrt(a.hi);
    const dd resid = dd_sub(a, two_prod(x, x));
    return quick_two_sum(x, resid.hi / (2.0 * x));
}

dd dd_abs(dd a) { return a.hi < 0.0 ? dd_neg(a) : a; }

struct cdd {
    dd re, im;
};

cdd cdd_from(cplx z) { return {{z.real(), 0.0}, {z.imag(), 0.0}}; }
cdd cdd_add(cdd a, cdd b) { return {dd_add(a.re, b.re), dd_add(a.im, b.im)}; }
cdd cdd_sub(cdd a, cdd b) { return {dd_sub(a.re, b.re), dd_sub(a.im, b.im)}; }
cdd cdd_conj(cdd a) { return {a.re, dd_neg(a.im)}; }

cdd cdd_mul(cdd a, cdd b) {
    return {dd_sub(dd_mul(a.re, b.re), dd_mul(a.im, b.im)),
            dd_add(dd_mul(a.re, b.im), dd_mul(a.im, b.re))};
}

cdd cdd_scale(cdd a, dd b) { return {dd_mul(a.re, b), dd_mul(a.im, b)}; }
cdd cdd_div_real(cdd a, dd b) { return {dd_div(a.re, b), dd_div(a.im, b)}; }
dd cdd_abs2(cdd a) { return dd_add(dd_mul(a.re, a.re), dd_mul(a.im, a.im)); }

// Pivoted Cholesky of a PSD matrix held in dd.  Fills `l` (n x rank,
// column-major, permuted row order) and `perm`; pivots below 1e-30 of the
// leading one end the factorization, which is what truncates exact-zero
// and sub-representable directions.
int pivoted_cholesky_dd(std::vector<cdd>& a, int n, std::vector<cdd>& l, std::vector<int>& perm) {
    perm.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    l.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), cdd{});
    auto at = [&](int i, int j) -> cdd& { return a[static_cast<std::size_t>(i) * n + j]; };
    double d0 = 0.0;
    for (int i = 0; i < n; ++i) d0 = std::max(d0, at(i, i).re.hi);
    if (!(d0 > 0.0)) return 0;
    int rank = 0;
    for (int k = 0; k < n; ++k) {
        int jmax = k;
        for (int j = k + 1; j < n; ++j)
            if (at(j, j).re.hi > at(jmax, jmax).re.hi) jmax = j;
        if (at(jmax, jmax).re.hi <= 1e-30 * d0) break;
        if (jmax != k) {
            std::swap(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(jmax)]);
            for (int j = 0; j < n; ++j) std::swap(at(k, j), at(jmax, j));
            for (int i = 0; i < n; ++i) std::swap(at(i, k), at(i, jmax));
            for (int c = 0; c < rank; ++c)
                std::swap(l[static_cast<std::size_t>(c) * n + k],
                          l[static_cast<std::size_t>(c) * n + jmax]);
        }
        const dd piv = dd_sqrt(at(k, k).re);
        cdd* col = &l[static_cast<std::size_t>(rank) * n];
        col[k] = {piv, {0.0, 0.0}};
        for (int i = k + 1; i < n; ++i) col[i] = cdd_div_real(at(i, k), piv);
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j <= i; ++j)
                at(i, j) = cdd_sub(at(i, j), cdd_mul(col[i], cdd_conj(col[j])));
            at(i, i).im = {0.0, 0.0};
            for (int j = k + 1; j < i; ++j) at(j, i) = cdd_conj(at(i, j));
        }
        ++rank;
    }
    return rank;
}

// Eigenvalues of a Hermitian dd matrix by cyclic Jacobi, values only.
std::vector<dd> jacobi_eigvals_dd(std::vector<cdd>& m, int n) {
    auto at = [&](int i, int j) -> cdd& { return m[static_cast<std::size_t>(i) * n + j]; };
    double scale = 0.0;
    for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(at(i, i).re.hi));
    const dd one{1.0, 0.0};
    if (scale > 0.0) {
        const double thr = 1e-31 * scale;
        for (int sweep = 0; sweep < 60; ++sweep) {
            double off = 0.0;
            for (int p = 0; p < n; ++p)
                for (int q = p + 1; q < n; ++q)
                    off = std::max(off, std::hypot(at(p, q).re.hi, at(p, q).im.hi));
            if (off <= thr) break;
            if (sweep == 59)
                throw NumericalFailure("uhlmann_fidelity: Jacobi sweep limit reached");
            for (int p = 0; p < n; ++p) {
                for (int q = p + 1; q < n; ++q) {
                    const cdd b = at(p, q);
                    if (std::hypot(b.re.hi, b.im.hi) <= thr) continue;
                    const dd app = at(p, p).re;
                    const dd aqq = at(q, q).re;
                    const dd mag = dd_sqrt(cdd_abs2(b));
                    const cdd u = cdd_div_real(b, mag);
                    const dd tau = dd_div(dd_sub(app, aqq), dd_scale(mag, 2.0));
                    const dd den = dd_add(dd_abs(tau), dd_sqrt(dd_add(one, dd_mul(tau, tau))));
                    dd t = dd_div(one, den);
                    if (tau.hi < 0.0) t = dd_neg(t);
                    const dd c = dd_div(one, dd_sqrt(dd_add(one, dd_mul(t, t))));
                    const dd s = dd_mul(t, c);
                    const dd c2 = dd_mul(c, c);
                    const dd s2 = dd_mul(s, s);
                    const dd cross = dd_scale(dd_mul(dd_mul(mag, c), s), 2.0);
                    const dd app2 = dd_add(dd_add(dd_mul(app, c2), dd_mul(aqq, s2)), cross);
                    const dd aqq2 = dd_sub(dd_add(dd_mul(app, s2), dd_mul(aqq, c2)), cross);
                    for (int j = 0; j < n; ++j) {
                        if (j == p || j == q) continue;
                        const cdd mjp = at(j, p);
                        const cdd mjq = at(j, q);
                        const cdd njp =
                            cdd_add(cdd_scale(mjp, c), cdd_scale(cdd_mul(cdd_conj(u), mjq), s));
                        const cdd njq = cdd_sub(cdd_scale(mjq, c), cdd_scale(cdd_mul(u, mjp), s));
                        at(j, p) = njp;
                        at(p, j) = cdd_conj(njp);
                        at(j, q) = njq;
                        at(q, j) = cdd_conj(njq);
                    }
                    at(p, p) = {app2, {0.0, 0.0}};
                    at(q, q) = {aqq2, {0.0, 0.0}};
                    at(p, q) = cdd{};
                    at(q, p) = cdd{};
                }
            }
        }
    }
    std::vector<dd> w(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = at(i, i).re;
    return w;
}

}  // namespace

double uhlmann_fidelity(const DensityMatrix& rho1, const DensityMatrix& rho2) {
    if (rho1.dim() != rho2.dim())
        throw DimensionMismatch("uhlmann_fidelity: states live in different spaces");
    const int n = rho1.dim();
    std::vector<cdd> a(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const cplx z = 0.5 * (rho1.mat()(i, j) + std::conj(rho1.mat()(j, i)));
            a[static_cast<std::size_t>(i) * n + j] = cdd_from(i == j ? cplx{z.real(), 0.0} : z);
        }
    std::vector<cdd> l;
    std::vector<int> perm;
    const int rank = pivoted_cholesky_dd(a, n, l, perm);
    if (rank == 0) return 0.0;
    // m = L^H rho2 L in the permuted frame; eigenvalues match those of
    // sqrt(rho1) rho2 sqrt(rho1) away from zero.
    std::vector<cdd> t(static_cast<std::size_t>(n) * static_cast<std::size_t>(rank));
    for (int i = 0; i < n; ++i)
        for (int b = 0; b < rank; ++b) {
            cdd acc{};
            for (int j = 0; j < n; ++j) {
                const cplx r2 = rho2.mat()(perm[static_cast<std::size_t>(i)],
                                           perm[static_cast<std::size_t>(j)]);
                acc = cdd_add(acc, cdd_mul(cdd_from(r2), l[static_cast<std::size_t>(b) * n + j]));
            }
            t[static_cast<std::size_t>(i) * rank + b] = acc;
        }
    std::vector<cdd> m(static_cast<std::size_t>(rank) * static_cast<std::size_t>(rank));
    for (int c = 0; c < rank; ++c)
        for (int b = 0; b < rank; ++b) {
            cdd acc{};
            for (int i = 0; i < n; ++i)
                acc = cdd_add(acc, cdd_mul(cdd_conj(l[static_cast<std::size_t>(c) * n + i]),
                                           t[static_cast<std::size_t>(i) * rank + b]));
            m[static_cast<std::size_t>(c) * rank + b] = acc;
        }
    for (int c = 0; c < rank; ++c) {
        m[static_cast<std::size_t>(c) * rank + c].im = {0.0, 0.0};
        for (int b = c + 1; b < rank; ++b) {
            const cdd avg = cdd_scale(
                cdd_add(m[static_cast<std::size_t>(c) * rank + b],
                        cdd_conj(m[static_cast<std::size_t>(b) * rank + c])),
                dd{0.5, 0.0});
            m[static_cast<std::size_t>(c) * rank + b] = avg;
            m[static_cast<std::size_t>(b) * rank + c] = cdd_conj(avg);
        }
    }
    const std::vector<dd> w = jacobi_eigvals_dd(m, rank);
    dd f{};
    for (const dd& wk : w) {
        if (wk.hi < -1e-8)
            throw NumericalFailure("uhlmann_fidelity: inner matrix lost positivity: " +
                                   std::to_string(wk.hi));
        f = dd_add(f, dd_sqrt(wk));
    }
    return f.hi + f.lo;
}

double default_bures_step(double abs_lambda) { return std::max(1e-3, 1e-2 * abs_lambda); }

double qfi_bures(const DensityMatrix& rho0, double abs_lambda, double step) {
    if (!(step > 0.0)) throw ConfigError("qfi_bures: step must be positive");
    if (abs_lambda - step < 0.0)
        throw ConfigError("qfi_bures: abs_lambda - step must stay non-negative");
    const auto estimate = [&](double s) {
        const DensityMatrix lo = apply_closed_form(rho0, std::pow(abs_lambda - s, 2));
        const DensityMatrix hi = apply_closed_form(rho0, std::pow(abs_lambda + s, 2));
        return 8.0 * (1.0 - uhlmann_fidelity(lo, hi)) / (4.0 * s * s);
    };
    const double e1 = estimate(step);
    const double e2 = estimate(0.5 * step);
    const double scale = std::max(std::abs(e1), std::abs(e2));
    if (scale > 0.0 && std::abs(e1 - e2) / scale > 1e-3)
        throw StepTooLarge("qfi_bures: estimates at step and step/2 differ by " +
                           std::to_string(std::abs(e1 - e2) / scale) + " relative");
    return (4.0 * e2 - e1) / 3.0;
}

QfiResult qfi_point(const DensityMatrix& rho0, double abs_lambda, double floor_rel) {
    if (!(abs_lambda > 0.0)) throw ConfigError("qfi_point: abs_lambda must be positive");
    const double kt = abs_lambda * abs_lambda;
    const DensityMatrix rho = apply_closed_form(rho0, kt);
    const double floor = floor_rel * rho.mat().trace().real();
    const SldResult sld = sld_operator(rho, drho_dlambda(rho0, abs_lambda), floor);

    QfiResult out;
    out.param_value = abs_lambda;
    out.qfi_sld = trace_rho_l2(rho, sld.l.mat);
    out.bures_step = std::min(default_bures_step(abs_lambda), 0.5 * abs_lambda);
    out.qfi_bures = qfi_bures(rho0, abs_lambda, out.bures_step);
    out.purified_bound = photon_stats(rho0).mean_n2;
    out.sld_info = sld.info;
    return out;
}

double sensitivity(const std::function<DensityMatrix(double)>& rho_fn, const Operator& observable,
                   double kappa_t, double step) {
    if (observable.mat.hermiticity_defect() > 1e-10)
        throw NotHermitian("sensitivity: observable is not Hermitian");
    if (!(step > 0.0)) throw ConfigError("sensitivity: step must be positive");
    if (kappa_t - step < 0.0)
        throw ConfigError("sensitivity: kappa_t - step must stay non-negative");

    const DensityMatrix rho = rho_fn(kappa_t);
    const double mean = expectation(rho, observable).real();
    const CMat f2 = kern::gemm(observable.mat, observable.mat);
    const double mean2 = expectation(rho, Operator(observable.space, f2)).real();
    const double spread = std::sqrt(std::max(mean2 - mean * mean, 0.0));

    const double up = expectation(rho_fn(kappa_t + step), observable).real();
    const double dn = expectation(rho_fn(kappa_t - step), observable).real();
    const double slope = (up - dn) / (2.0 * step);
    if (std::abs(slope) < 1e-14)
        throw ZeroSlope("sensitivity: observable mean is flat in kappa t");
    return spread / std::abs(slope);
}

}  // namespace dephasim
