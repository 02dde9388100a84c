#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>
#include <random>

#include "dephasim/channel.hpp"
#include "dephasim/fock.hpp"
#include "dephasim/kernels.hpp"
#include "dephasim/linalg.hpp"
#include "dephasim/phase_space.hpp"
#include "dephasim/probes.hpp"
#include "doctest.h"

using namespace dephasim;

namespace {

constexpr double kPi = std::numbers::pi;

DensityMatrix probe_rho(ProbeSpec spec, int dim) {
    return DensityMatrix::from_state(build_probe(FockSpace(dim), spec, Tolerances{}));
}

DensityMatrix vacuum(int dim) {
    CVec a(dim, 0.0);
    a[0] = 1.0;
    return DensityMatrix::from_state(StateVector::normalized(FockSpace(dim), a));
}

double min_value(const WignerField& f) {
    double m = f.values[0];
    for (double v : f.values) m = std::min(m, v);
    return m;
}

double max_abs_value(const WignerField& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
}

// d-th Fourier coefficient of the marginal, continuous normalization
// c_d = integral P(theta) e^{-i d theta} dtheta.
cplx marginal_mode(const std::vector<double>& p, int d) {
    const int na = int(p.size());
    cplx acc = 0.0;
    for (int j = 0; j < na; ++j) {
        const double th = 2.0 * kPi * j / na;
        acc += p[j] * cplx{std::cos(d * th), -std::sin(d * th)};
    }
    return acc * (2.0 * kPi / na);
}

}  // namespace

TEST_CASE("grid parameters are validated") {
    CHECK_NOTHROW(PhaseSpaceGrid(3.0, 128, 64));
    CHECK_THROWS_AS(PhaseSpaceGrid(0.0, 128, 64), ConfigError);
    CHECK_THROWS_AS(PhaseSpaceGrid(-2.0, 128, 64), ConfigError);
    CHECK_THROWS_AS(PhaseSpaceGrid(3.0, 1, 64), ConfigError);
    CHECK_THROWS_AS(PhaseSpaceGrid(3.0, 128, 62), ConfigError);
    CHECK_THROWS_AS(PhaseSpaceGrid(3.0, 128, 65), ConfigError);
}

TEST_CASE("vacuum field matches the analytic Gaussian") {
    const DensityMatrix rho = vacuum(8);
    CHECK(wigner_point(rho, 0.0) == doctest::Approx(2.0 / kPi).epsilon(0).scale(0).epsilon(1e-12));
    const PhaseSpaceGrid grid(4.0, 129, 64);
    const WignerField f = wigner_grid(rho, grid);
    for (int i = 0; i < grid.n_radial; i += 16) {
        const double r = grid.radius(i);
        const double expect = 2.0 / kPi * std::exp(-2.0 * r * r);
        for (int j = 0; j < grid.n_angular; j += 9)
            CHECK(std::abs(f.value(i, j) - expect) < 1e-12);
    }
    // evaluation far outside the support is legal and just decays
    const double far = wigner_point(rho, cplx{30.0, 0.0});
    CHECK(std::isfinite(far));
    CHECK(std::abs(far) < 1e-200);
}

TEST_CASE("mode-sum values match the displaced-parity trace") {
    // Independent route: pad to 48 levels, build D(2 beta) by exponentiating
    // the ladder generator, and take (2/pi) Re tr[rho D Parity].
    ProbeSpec spec;
    spec.family = ProbeFamily::Cat;
    spec.alpha = 1.2;
    const DensityMatrix rho = apply_closed_form(probe_rho(spec, 12), 0.3);

    const int pad = 48;
    const FockSpace ps(pad);
    const CMat adag = creation_op(ps).mat;
    const CMat a = annihilation_op(ps).mat;
    CMat rho_pad(pad, pad);
    for (int n = 0; n < 12; ++n)
        for (int m = 0; m < 12; ++m) rho_pad(n, m) = rho.mat()(n, m);

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.8, 1.8);
    for (int k = 0; k < 10; ++k) {
        const cplx beta{u(rng), u(rng)};
        const cplx zeta = 2.0 * beta;
        CMat gen = zeta * adag;
        gen -= std::conj(zeta) * a;
        CMat d = linalg::expm(gen);
        for (int n = 0; n < pad; ++n)       // fold the parity into D's columns
            for (int m = 1; m < pad; m += 2) d(n, m) = -d(n, m);
        const double oracle = 2.0 / kPi * kern::gemm(rho_pad, d).trace().real();
        CHECK(std::abs(wigner_point(rho, beta) - oracle) < 1e-8);
    }
}

TEST_CASE("fields respect the 2/pi bound and integrate to one") {
    ProbeSpec spec;
    spec.family = ProbeFamily::Cat;
    spec.alpha = 1.5;
    const DensityMatrix rho = probe_rho(spec, 24);
    const WignerField f = wigner_grid(rho, PhaseSpaceGrid(5.0, 512, 128));
    CHECK(max_abs_value(f) <= 2.0 / kPi + 1e-9);
    CHECK(wigner_point(rho, 0.0) == doctest::Approx(2.0 / kPi).epsilon(1e-9));

    const auto p = converged_angular_marginal(rho, 5.0, 128);
    double total = 0.0;
    for (double v : p) total += v;
    CHECK(std::abs(total * 2.0 * kPi / 128 - 1.0) < 1e-6);
}

TEST_CASE("marginal certificate rejects inadequate grids") {
    ProbeSpec spec;
    spec.alpha = 2.0;
    const DensityMatrix rho = probe_rho(spec, 32);
    // r_max far inside the support: mass is missed no matter the resolution
    CHECK_THROWS_AS(angular_marginal(wigner_grid(rho, PhaseSpaceGrid(1.5, 4096, 64))),
                    NormalizationError);
    // coarse radial sampling under-integrates the fringes of a cat
    spec.family = ProbeFamily::Cat;
    spec.alpha = 1.5;
    CHECK_THROWS_AS(angular_marginal(wigner_grid(probe_rho(spec, 24), PhaseSpaceGrid(5.0, 96, 64))),
                    NormalizationError);
}

TEST_CASE("vacuum marginal is uniform at 1/(2 pi)") {
    const auto p = converged_angular_marginal(vacuum(8), 4.0, 64);
    CHECK(uniformity_defect(p) < 1e-6);
}

TEST_CASE("marginal Fourier modes decay as exp(-kt d^2 / 2)") {
    ProbeSpec spec;
    spec.alpha = 1.0;
    const DensityMatrix rho0 = probe_rho(spec, 20);
    const double kt = 0.4;
    const PhaseSpaceGrid grid(4.5, 4096, 128);
    const auto p0 = angular_marginal(wigner_grid(rho0, grid));
    const auto p1 = angular_marginal(wigner_grid(apply_closed_form(rho0, kt), grid));
    for (int d = 1; d <= 3; ++d) {
        const cplx c0 = marginal_mode(p0, d);
        const cplx c1 = marginal_mode(p1, d);
        REQUIRE(std::abs(c0) > 1e-3);
        // the quadrature error is mode-diagonal, so the ratio is exact
        CHECK(std::abs(c1 / c0 - std::exp(-kt * d * d / 2.0)) < 1e-10);
    }
}

TEST_CASE("phase-symmetric states: constant rows, zero diffusion residual") {
    const int dim = 12;
    CMat m(dim, dim);
    m(0, 0) = 0.5;
    m(3, 3) = 0.3;
    m(7, 7) = 0.2;
    const DensityMatrix rho = DensityMatrix::make(FockSpace(dim), std::move(m));
    const PhaseSpaceGrid grid(5.0, 256, 64);
    const WignerField f = wigner_grid(rho, grid);
    for (int i = 0; i < grid.n_radial; i += 7)
        for (int j = 1; j < grid.n_angular; ++j) CHECK(f.value(i, j) == f.value(i, 0));
    CHECK(diffusion_residual_wigner(rho, 0.5, 5e-4, grid) <= 1e-8);
    CHECK(diffusion_residual_marginal(rho, 0.5, 5e-4, grid) <= 1e-8);
}

TEST_CASE("diffusion residual is small and shrinks ~4x under dt halving") {
    ProbeSpec spec;
    spec.alpha = 1.0;
    const DensityMatrix rho0 = probe_rho(spec, 20);
    const PhaseSpaceGrid grid(4.5, 96, 64);
    const double kt = 0.1;

    const double rw1 = diffusion_residual_wigner(rho0, kt, 1e-3, grid);
    const double rw2 = diffusion_residual_wigner(rho0, kt, 5e-4, grid);
    CHECK(rw1 < 1e-4);
    CHECK(rw1 / rw2 > 3.0);
    CHECK(rw1 / rw2 < 4.5);

    const double rm1 = diffusion_residual_marginal(rho0, kt, 1e-3, grid);
    const double rm2 = diffusion_residual_marginal(rho0, kt, 5e-4, grid);
    CHECK(rm1 < 1e-4);
    CHECK(rm1 / rm2 > 3.0);
    CHECK(rm1 / rm2 < 4.5);
}

TEST_CASE("dephased cat keeps interference negativity at kt = 1") {
    ProbeSpec spec;
    spec.family = ProbeFamily::Cat;
    spec.alpha = 1.5;
    const DensityMatrix rho0 = probe_rho(spec, 24);
    const PhaseSpaceGrid grid(5.0, 512, 128);
    const double neg0 = negativity_volume(wigner_grid(rho0, grid));
    const WignerField f1 = wigner_grid(apply_closed_form(rho0, 1.0), grid);
    const double neg1 = negativity_volume(f1);
    CHECK(min_value(f1) < -0.01);
    CHECK(neg1 > 1e-3);
    CHECK(neg1 < neg0);
    CHECK(negativity_volume(wigner_grid(vacuum(8), PhaseSpaceGrid(4.0, 4096, 64))) < 2e-6);
}

TEST_CASE("strong dephasing flattens the marginal") {
    ProbeSpec spec;
    spec.alpha = 1.0;
    const DensityMatrix rho0 = probe_rho(spec, 20);
    const auto p = converged_angular_marginal(apply_closed_form(rho0, 20.0), 4.5, 128);
    CHECK(uniformity_defect(p) < 1e-4);

    const PhaseSpaceGrid grid(4.5, 2048, 128);
    double prev = -1.0;
    for (double kt : {0.0, 0.25, 1.0, 5.0}) {
        const double cv =
            circular_variance(angular_marginal(wigner_grid(apply_closed_form(rho0, kt), grid)));
        CHECK(cv > prev + 1e-12);
        prev = cv;
    }
}

TEST_CASE("default grid covers the state") {
    const PhaseSpaceGrid gv = default_grid_for(vacuum(8));
    CHECK(gv.r_max >= 3.3);
    CHECK(gv.r_max <= 4.9);
    CHECK(gv.n_radial == 256);
    CHECK(gv.n_angular == 256);

    ProbeSpec spec;
    spec.alpha = 2.0;
    const DensityMatrix rho = probe_rho(spec, 48);
    const PhaseSpaceGrid gc = default_grid_for(rho, 128, 64);
    CHECK(gc.r_max >= 5.2);
    CHECK_NOTHROW(converged_angular_marginal(rho, gc.r_max, 64));
}

TEST_CASE("diffusion residual argument validation") {
    const DensityMatrix rho = vacuum(8);
    const PhaseSpaceGrid grid(4.0, 64, 64);
    CHECK_THROWS_AS(diffusion_residual_wigner(rho, 0.5, 0.0, grid), ConfigError);
    CHECK_THROWS_AS(diffusion_residual_wigner(rho, 1e-4, 1e-3, grid), ConfigError);
    CHECK_THROWS_AS(diffusion_residual_marginal(rho, 1e-4, 1e-3, grid), ConfigError);
}
