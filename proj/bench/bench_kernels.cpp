// Times the OpenMP kernels against their serial references on the shapes the
// engine actually uses. Correctness of the pairings is covered by
// test_kernels; this binary is for watching the speedup and spotting
// regressions, so it prints a table and exits 0 unconditionally.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dephasim/channel.hpp"
#include "dephasim/fock.hpp"
#include "dephasim/kernels.hpp"
#include "dephasim/linalg.hpp"
#include "dephasim/probes.hpp"

using namespace dephasim;

namespace {

double time_of(const std::function<void()>& fn, int reps) {
    using clock = std::chrono::steady_clock;
    fn();  // warm-up, also first-touch of any lazily allocated buffers
    const auto t0 = clock::now();
    for (int i = 0; i < reps; ++i) fn();
    return std::chrono::duration<double>(clock::now() - t0).count() / reps * 1e3;
}

void row(const char* name, int dim, double serial_ms, double parallel_ms) {
    std::printf("%-28s %5d %12.3f %12.3f %9.2fx\n", name, dim, serial_ms, parallel_ms,
                serial_ms / parallel_ms);
}

CMat random_hermitian(int dim, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CMat m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = i; j < dim; ++j) {
            m(i, j) = cplx{u(rng), i == j ? 0.0 : u(rng)};
            m(j, i) = std::conj(m(i, j));
        }
    return m;
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (compiled without OpenMP)\n");
#endif
    std::printf("%-28s %5s %12s %12s %9s\n", "kernel", "dim", "serial ms", "openmp ms",
                "speedup");

    for (int dim : {64, 128, 256}) {
        const CMat a = random_hermitian(dim, 11u + dim);
        const CMat b = random_hermitian(dim, 23u + dim);
        const double ts = time_of([&] { kern::ref::gemm(a, b); }, 5);
        const double tp = time_of([&] { kern::gemm(a, b); }, 5);
        row("gemm", dim, ts, tp);
    }

    const double kt = 0.5;
    for (int dim : {64, 128, 256}) {
        ProbeSpec spec;
        spec.family = ProbeFamily::Cat;
        spec.alpha = std::sqrt(dim / 16.0);
        const CMat rho =
            DensityMatrix::from_state(build_probe(FockSpace(dim), spec, Tolerances{})).mat();
        const int terms = default_kraus_terms(dim, kt);
        const double ts = time_of([&] { kern::ref::kraus_apply(rho, kt, terms); }, 3);
        // The parallel path assembles the Kraus Gram matrix once and applies
        // it as one Hadamard product, so it is timed as that pairing.
        const double tp = time_of(
            [&] {
                const CMat g = kern::kraus_gram(dim, kt, terms);
                CMat out = rho;
                for (int n = 0; n < dim; ++n)
                    for (int m = 0; m < dim; ++m) out(n, m) *= g(n, m);
            },
            3);
        row("kraus gram+apply", dim, ts, tp);
    }

    for (int dim : {64, 128}) {
        ProbeSpec spec;
        spec.family = ProbeFamily::Cat;
        spec.alpha = std::sqrt(dim / 16.0);
        const CMat rho =
            DensityMatrix::from_state(build_probe(FockSpace(dim), spec, Tolerances{})).mat();
        const int nq = default_quad_points(dim, kt);
        const auto [nodes, weights] = linalg::gauss_hermite(nq);
        const double ts =
            time_of([&] { kern::ref::phase_avg_apply(rho, kt, nodes, weights); }, 3);
        const double tp = time_of(
            [&] {
                const std::vector<double> f = kern::phase_avg_factors(dim, kt, nodes, weights);
                CMat out = rho;
                for (int n = 0; n < dim; ++n)
                    for (int m = 0; m < dim; ++m) out(n, m) *= f[std::abs(n - m)];
            },
            3);
        row("phase-average", dim, ts, tp);
    }

    for (int dim : {32, 64}) {
        ProbeSpec spec;
        spec.family = ProbeFamily::Cat;
        spec.alpha = 2.0;
        const CMat rho =
            DensityMatrix::from_state(build_probe(FockSpace(dim), spec, Tolerances{})).mat();
        std::vector<double> radii(128);
        for (std::size_t i = 0; i < radii.size(); ++i)
            radii[i] = 6.0 * double(i) / (radii.size() - 1);
        const double ts = time_of([&] { kern::ref::wigner_field(rho, radii, 128); }, 3);
        const double tp = time_of([&] { kern::wigner_field(rho, radii, 128); }, 3);
        row("wigner field 128x128", dim, ts, tp);
    }

    return 0;
}
