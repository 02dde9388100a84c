#include "dephasim/probes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace dephasim {

namespace {

CVec coherent_amps(int dim, cplx alpha) {
    CVec c(dim);
    cplx a = std::exp(-0.5 * std::norm(alpha));
    for (int n = 0; n < dim; ++n) {
        c[n] = a;
        a *= alpha / std::sqrt(n + 1.0);
    }
    return c;
}

void accumulate(CVec& acc, const CVec& v) {
    for (size_t i = 0; i < acc.size(); ++i) acc[i] += v[i];
}

CVec matvec(const CMat& m, const CVec& v) {
    CVec out(m.rows(), 0.0);
    for (int i = 0; i < m.rows(); ++i) {
        cplx s = 0;
        for (int j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

CVec column(const CMat& m, int j) {
    CVec out(m.rows());
    for (int i = 0; i < m.rows(); ++i) out[i] = m(i, j);
    return out;
}

bool finite_support(ProbeFamily f) {
    return f == ProbeFamily::Fock || f == ProbeFamily::ModSSW;
}

CVec raw_amps(FockSpace space, const ProbeSpec& spec, const Tolerances& tol) {
    const int dim = space.dim;
    switch (spec.family) {
        case ProbeFamily::Coherent:
            return coherent_amps(dim, spec.alpha);
        case ProbeFamily::Cat: {
            CVec c = coherent_amps(dim, spec.alpha);
            accumulate(c, coherent_amps(dim, -spec.alpha));
            return c;
        }
        case ProbeFamily::Kitten: {
            CVec c = coherent_amps(dim, spec.alpha);
            cplx rot = spec.alpha;
            for (int k = 1; k < 4; ++k) {
                rot *= cplx(0, 1);
                accumulate(c, coherent_amps(dim, rot));
            }
            return c;
        }
        case ProbeFamily::SqCat: {
            CVec cat = coherent_amps(dim, spec.alpha);
            accumulate(cat, coherent_amps(dim, -spec.alpha));
            return matvec(squeeze_op(space, spec.r, tol).mat, cat);
        }
        case ProbeFamily::SS: {
            CVec c = column(squeeze_op(space, spec.r, tol).mat, 0);
            accumulate(c, column(squeeze_op(space, -spec.r, tol).mat, 0));
            return c;
        }
        case ProbeFamily::SqCS:
            return matvec(squeeze_op(space, spec.r, tol).mat, coherent_amps(dim, spec.alpha));
        case ProbeFamily::SSKitten: {
            CVec kit = coherent_amps(dim, spec.alpha);
            cplx rot = spec.alpha;
            for (int k = 1; k < 4; ++k) {
                rot *= cplx(0, 1);
                accumulate(kit, coherent_amps(dim, rot));
            }
            CVec c = matvec(squeeze_op(space, spec.r, tol).mat, kit);
            accumulate(c, matvec(squeeze_op(space, -spec.r, tol).mat, kit));
            return c;
        }
        case ProbeFamily::CbPhS:
            return column(cubic_phase_op(space, spec.gamma).mat, 0);
        case ProbeFamily::ModSSW: {
            if (spec.s < 0 || spec.q <= 0)
                throw ConfigError("ModSSW requires s >= 0 and q > 0");
            if (spec.s >= dim)
                throw TruncationError("ModSSW support cutoff s = " + std::to_string(spec.s) +
                                      " does not fit in dimension " + std::to_string(dim));
            CVec c(dim, 0.0);
            for (int n = 0; n <= spec.s; ++n) c[n] = std::pow(n + spec.q, -spec.p);
            return c;
        }
        case ProbeFamily::Fock: {
            if (spec.fock_n < 0 || spec.fock_n >= dim)
                throw TruncationError("Fock level " + std::to_string(spec.fock_n) +
                                      " does not fit in dimension " + std::to_string(dim));
            CVec c(dim, 0.0);
            c[spec.fock_n] = 1.0;
            return c;
        }
        case ProbeFamily::SqueezedVacuum:
            return column(squeeze_op(space, spec.r, tol).mat, 0);
    }
    throw ConfigError("unknown probe family");
}

PhotonStats stats_from_weights(const std::vector<double>& w) {
    double m1 = 0, m2 = 0;
    for (size_t n = 0; n < w.size(); ++n) {
        m1 += double(n) * w[n];
        m2 += double(n) * double(n) * w[n];
    }
    PhotonStats st;
    st.mean_n = m1;
    st.mean_n2 = m2;
    st.var_n = m2 - m1 * m1;
    st.agarwal_q = (m1 < 1e-12) ? std::numeric_limits<double>::quiet_NaN() : st.var_n / m1;
    return st;
}

constexpr int kDimLadder[] = {16, 24, 32, 48, 64, 96, 128, 192, 256, 384, 512};

}  // namespace

const char* family_name(ProbeFamily f) {
    switch (f) {
        case ProbeFamily::Coherent: return "Coherent";
        case ProbeFamily::Cat: return "Cat";
        case ProbeFamily::Kitten: return "Kitten";
        case ProbeFamily::SqCat: return "SqCat";
        case ProbeFamily::SS: return "SS";
        case ProbeFamily::SqCS: return "SqCS";
        case ProbeFamily::SSKitten: return "SSKitten";
        case ProbeFamily::CbPhS: return "CbPhS";
        case ProbeFamily::ModSSW: return "ModSSW";
        case ProbeFamily::Fock: return "Fock";
        case ProbeFamily::SqueezedVacuum: return "SqueezedVacuum";
    }
    return "?";
}

ProbeFamily family_from_name(std::string_view name) {
    static constexpr ProbeFamily all[] = {
        ProbeFamily::Coherent, ProbeFamily::Cat,      ProbeFamily::Kitten,
        ProbeFamily::SqCat,    ProbeFamily::SS,       ProbeFamily::SqCS,
        ProbeFamily::SSKitten, ProbeFamily::CbPhS,    ProbeFamily::ModSSW,
        ProbeFamily::Fock,     ProbeFamily::SqueezedVacuum,
    };
    for (ProbeFamily f : all)
        if (name == family_name(f)) return f;
    throw ConfigError("unknown probe family '" + std::string(name) + "'");
}

StateVector build_probe(FockSpace space, const ProbeSpec& spec, const Tolerances& tol) {
    StateVector psi = StateVector::normalized(space, raw_amps(space, spec, tol), tol);
    if (tol.strict && !finite_support(spec.family) && psi.tail_mass() > tol.tail_mass)
        throw TruncationError(std::string(family_name(spec.family)) + " probe leaves " +
                              std::to_string(psi.tail_mass()) + " tail mass at dimension " +
                              std::to_string(space.dim));
    return psi;
}

PhotonStats photon_stats(const StateVector& psi) {
    std::vector<double> w(psi.dim());
    for (int n = 0; n < psi.dim(); ++n) w[n] = std::norm(psi.amp(n));
    return stats_from_weights(w);
}

PhotonStats photon_stats(const DensityMatrix& rho) {
    std::vector<double> w(rho.space().dim);
    for (int n = 0; n < rho.space().dim; ++n) w[n] = rho.mat()(n, n).real();
    return stats_from_weights(w);
}

int choose_dim(const ProbeSpec& spec, const Tolerances& tol, int max_dim) {
    for (size_t i = 0; i + 1 < std::size(kDimLadder); ++i) {
        const int d = kDimLadder[i], d2 = kDimLadder[i + 1];
        if (d2 > max_dim) break;
        try {
            StateVector a = build_probe(FockSpace(d), spec, tol);
            if (!finite_support(spec.family) && a.tail_mass() > 1e-12) continue;
            StateVector b = build_probe(FockSpace(d2), spec, tol);
            PhotonStats sa = photon_stats(a), sb = photon_stats(b);
            const double scale = std::max(1.0, std::abs(sb.mean_n2));
            if (std::abs(sa.mean_n - sb.mean_n) < 1e-9 * scale &&
                std::abs(sa.mean_n2 - sb.mean_n2) < 1e-9 * scale)
                return d;
        } catch (const TruncationError&) {
            continue;
        } catch (const DegenerateState&) {
            continue;   // amplitude underflow: every retained level rounded to zero
        }
    }
    throw TruncationError(std::string("no dimension up to ") + std::to_string(max_dim) +
                          " represents this " + family_name(spec.family) + " probe");
}

namespace {

ProbeSpec spec_with(const ProbeSpec& templ, FreeParam which, double x) {
    ProbeSpec s = templ;
    const cplx phase = (std::abs(templ.alpha) > 0)
                           ? templ.alpha / std::abs(templ.alpha)
                           : cplx(1.0, 0.0);
    switch (which) {
        case FreeParam::Alpha: s.alpha = phase * x; break;
        case FreeParam::R: s.r = x; break;
        case FreeParam::Gamma: s.gamma = x; break;
    }
    return s;
}

template <class MeanFn>
ProbeSpec solve_bisect(const ProbeSpec& templ, FreeParam which, double target_mean_n,
                       MeanFn&& mean_at) {
    if (target_mean_n < 0) throw BracketError("target mean photon number must be nonnegative");
    auto at = [&](double x) { return spec_with(templ, which, x); };

    const double kMeanTol = 1e-8;
    try {
        double lo = 0.0, flo = mean_at(0.0);
        if (std::abs(flo - target_mean_n) < kMeanTol) return at(lo);
        if (flo > target_mean_n)
            throw BracketError("target mean photon number below the family's floor " +
                               std::to_string(flo));
        double hi = 1.0, fhi = mean_at(hi);
        while (fhi < target_mean_n) {
            if (fhi < flo - kMeanTol)
                throw BracketError("mean photon number not monotone in the free parameter");
            lo = hi;
            flo = fhi;
            hi *= 2.0;
            if (hi > 64.0) throw BracketError("target mean photon number unreachable");
            fhi = mean_at(hi);
        }
        for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
            const double mid = 0.5 * (lo + hi), fm = mean_at(mid);
            if (std::abs(fm - target_mean_n) < kMeanTol) return at(mid);
            (fm < target_mean_n ? lo : hi) = mid;
        }
        const double x = 0.5 * (lo + hi);
        if (std::abs(mean_at(x) - target_mean_n) >= kMeanTol)
            throw BracketError("bisection failed to pin the target mean photon number");
        return at(x);
    } catch (const TruncationError& e) {
        throw BracketError(std::string("target unreachable under the dimension cap: ") + e.what());
    }
}

}  // namespace

ProbeSpec solve_param_for_mean_n(const ProbeSpec& templ, FreeParam which, double target_mean_n,
                                 const Tolerances& tol, int max_dim) {
    return solve_bisect(templ, which, target_mean_n, [&](double x) {
        ProbeSpec s = spec_with(templ, which, x);
        return photon_stats(build_probe(FockSpace(choose_dim(s, tol, max_dim)), s, tol)).mean_n;
    });
}

ProbeSpec solve_param_for_mean_n(const ProbeSpec& templ, FreeParam which, double target_mean_n,
                                 FockSpace space, const Tolerances& tol) {
    return solve_bisect(templ, which, target_mean_n, [&](double x) {
        ProbeSpec s = spec_with(templ, which, x);
        return photon_stats(build_probe(space, s, tol)).mean_n;
    });
}

}  // namespace dephasim
