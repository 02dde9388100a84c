#include <cmath>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>
#include <json.hpp>

#include "dephasim/channel.hpp"
#include "dephasim/config.hpp"
#include "dephasim/fock.hpp"
#include "dephasim/phase_space.hpp"
#include "dephasim/probes.hpp"
#include "dephasim/purification.hpp"
#include "dephasim/qfi.hpp"
#include "dephasim/report.hpp"

namespace {

using namespace dephasim;
using ojson = nlohmann::ordered_json;

Tolerances run_tolerances(const RunConfig& cfg) {
    Tolerances tol;
    tol.strict = cfg.strict;
    return tol;
}

int resolve_dim(const RunConfig& cfg, const ProbeSpec& spec, const Tolerances& tol) {
    return cfg.dim > 0 ? cfg.dim : choose_dim(spec, tol);
}

void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.out_path.empty()) {
        std::cout << text;
    } else {
        write_file(cfg.out_path, text);
        std::cerr << "wrote " << cfg.out_path << "\n";
    }
}

ojson probe_json(const ProbeSpec& spec) { return ojson::parse(probe_param_json(spec)); }

ojson photon_json(const PhotonStats& st) {
    ojson j;
    j["mean_n"] = st.mean_n;
    j["mean_n2"] = st.mean_n2;
    j["var_n"] = st.var_n;
    if (std::isnan(st.agarwal_q))
        j["agarwal_q"] = nullptr;
    else
        j["agarwal_q"] = st.agarwal_q;
    return j;
}

int cmd_state(const RunConfig& cfg) {
    const Tolerances tol = run_tolerances(cfg);
    const int dim = resolve_dim(cfg, cfg.probe, tol);
    const StateVector psi = build_probe(FockSpace(dim), cfg.probe, tol);
    const PhotonStats st = photon_stats(psi);
    MetaExtras extra;
    extra.emplace_back("probe", probe_param_json(cfg.probe));
    extra.emplace_back("fock-dim", std::to_string(dim));
    if (cfg.format == OutputFormat::Csv) {
        std::string out = csv_meta_header(cfg, extra);
        out += "n,re,im,prob\n";
        for (int n = 0; n < dim; ++n) {
            const cplx a = psi.amp(n);
            out += std::to_string(n) + ',' + format_g(a.real()) + ',' + format_g(a.imag()) +
                   ',' + format_g(std::norm(a)) + '\n';
        }
        emit(cfg, out);
    } else {
        ojson data;
        data["probe"] = probe_json(cfg.probe);
        data["dim"] = dim;
        data["tail_mass"] = psi.tail_mass();
        data["photon"] = photon_json(st);
        ojson amps = ojson::array();
        for (int n = 0; n < dim; ++n)
            amps.push_back({psi.amp(n).real(), psi.amp(n).imag()});
        data["amplitudes"] = std::move(amps);
        emit(cfg, json_report(cfg, extra, data.dump(2)));
    }
    return 0;
}

int cmd_evolve(const RunConfig& cfg) {
    const Tolerances tol = run_tolerances(cfg);
    const int dim = resolve_dim(cfg, cfg.probe, tol);
    const StateVector psi = build_probe(FockSpace(dim), cfg.probe, tol);
    const DensityMatrix rho0 = DensityMatrix::from_state(psi);
    const DensityMatrix rho =
        (cfg.representation == Representation::Kraus && cfg.kraus_terms > 0)
            ? apply_kraus(rho0, ChannelParam(cfg.kappa_t, cfg.kraus_terms))
            : apply_channel(rho0, cfg.kappa_t, cfg.representation);
    const double l1_before = l1_coherence(rho0);
    const double l1_after = l1_coherence(rho);
    MetaExtras extra;
    extra.emplace_back("probe", probe_param_json(cfg.probe));
    extra.emplace_back("fock-dim", std::to_string(dim));
    extra.emplace_back("kappa_t", format_g(cfg.kappa_t));
    extra.emplace_back("representation", representation_name(cfg.representation));
    extra.emplace_back("l1-coherence", format_g(l1_before) + " -> " + format_g(l1_after));
    if (cfg.format == OutputFormat::Csv) {
        std::string out = csv_meta_header(cfg, extra);
        out += "n,m,re,im\n";
        for (int n = 0; n < dim; ++n)
            for (int m = 0; m < dim; ++m) {
                const cplx v = rho.mat()(n, m);
                out += std::to_string(n) + ',' + std::to_string(m) + ',' +
                       format_g(v.real()) + ',' + format_g(v.imag()) + '\n';
            }
        emit(cfg, out);
    } else {
        ojson data;
        data["probe"] = probe_json(cfg.probe);
        data["dim"] = dim;
        data["kappa_t"] = cfg.kappa_t;
        data["representation"] = representation_name(cfg.representation);
        data["l1_coherence"] = {{"initial", l1_before}, {"final", l1_after}};
        data["trace"] = rho.mat().trace().real();
        data["min_eigenvalue"] = rho.min_eigenvalue();
        ojson rows = ojson::array();
        for (int n = 0; n < dim; ++n) {
            ojson row = ojson::array();
            for (int m = 0; m < dim; ++m)
                row.push_back({rho.mat()(n, m).real(), rho.mat()(n, m).imag()});
            rows.push_back(std::move(row));
        }
        data["matrix"] = std::move(rows);
        emit(cfg, json_report(cfg, extra, data.dump(2)));
    }
    return 0;
}

int cmd_qfi(const RunConfig& cfg) {
    const Tolerances tol = run_tolerances(cfg);
    const int dim = resolve_dim(cfg, cfg.probe, tol);
    const StateVector psi = build_probe(FockSpace(dim), cfg.probe, tol);
    const PhotonStats st = photon_stats(psi);
    const QfiResult res = qfi_point(DensityMatrix::from_state(psi), cfg.abs_lambda);
    MetaExtras extra;
    extra.emplace_back("fock-dim", std::to_string(dim));
    if (cfg.format == OutputFormat::Csv) {
        QfiRow row;
        row.probe_family = family_name(cfg.probe.family);
        row.param_json = probe_param_json(cfg.probe);
        row.stats = st;
        row.abs_lambda = res.param_value;
        row.qfi_sld = res.qfi_sld;
        row.qfi_bures = res.qfi_bures;
        row.purified_bound = res.purified_bound;
        emit(cfg, qfi_csv(cfg, {row}, false, extra));
    } else {
        ojson data;
        data["probe"] = probe_json(cfg.probe);
        data["dim"] = dim;
        data["photon"] = photon_json(st);
        data["abs_lambda"] = res.param_value;
        data["kappa_t"] = res.param_value * res.param_value;
        data["qfi_sld"] = res.qfi_sld;
        data["qfi_bures"] = res.qfi_bures;
        data["purified_bound"] = res.purified_bound;
        data["sld"] = {{"eig_floor", res.sld_info.eig_floor},
                       {"discarded_weight", res.sld_info.discarded_weight},
                       {"residual", res.sld_info.residual},
                       {"degenerate_warning", res.sld_info.degenerate_warning}};
        data["bures_step"] = res.bures_step;
        emit(cfg, json_report(cfg, extra, data.dump(2)));
    }
    return 0;
}

FreeParam free_param_for(ProbeFamily f) {
    switch (f) {
        case ProbeFamily::Coherent:
        case ProbeFamily::Cat:
        case ProbeFamily::Kitten:
        case ProbeFamily::SqCat:
        case ProbeFamily::SqCS:
        case ProbeFamily::SSKitten: return FreeParam::Alpha;
        case ProbeFamily::SS:
        case ProbeFamily::SqueezedVacuum: return FreeParam::R;
        case ProbeFamily::CbPhS: return FreeParam::Gamma;
        case ProbeFamily::ModSSW:
        case ProbeFamily::Fock: break;
    }
    throw ConfigError(std::string(family_name(f)) + " has no free parameter for a mean-n sweep");
}

int cmd_sweep(const RunConfig& cfg) {
    const Tolerances tol = run_tolerances(cfg);
    const int dim = cfg.dim > 0 ? cfg.dim : 64;
    const FockSpace space(dim);
    const SweepAxis& ax = cfg.sweep_axis;
    std::vector<double> targets(static_cast<std::size_t>(ax.points));
    for (int i = 0; i < ax.points; ++i)
        targets[static_cast<std::size_t>(i)] =
            ax.points == 1 ? ax.min : ax.min + (ax.max - ax.min) * i / (ax.points - 1);

    const std::size_t total = cfg.sweep_families.size() * targets.size();
    std::vector<QfiRow> rows(total);
    // Rows are independent; each index writes only its own slot, so the
    // emitted order (family-major, then axis) is thread-count invariant.
#pragma omp parallel for schedule(dynamic)
    for (std::size_t idx = 0; idx < total; ++idx) {
        const ProbeFamily family = cfg.sweep_families[idx / targets.size()];
        const double target = targets[idx % targets.size()];
        QfiRow& row = rows[idx];
        row.probe_family = family_name(family);
        ProbeSpec templ;
        templ.family = family;
        row.param_json = probe_param_json(templ);
        const double nan = std::nan("");
        row.stats = {nan, nan, nan, nan};
        row.abs_lambda = cfg.abs_lambda;
        row.qfi_sld = row.qfi_bures = row.purified_bound = nan;
        try {
            ProbeSpec solved = templ;
            if (family == ProbeFamily::Fock) {
                // Fock states carry integer energy; the target snaps to the
                // nearest level rather than failing the solve.
                solved.fock_n = static_cast<int>(std::lround(target));
                if (solved.fock_n < 1) solved.fock_n = 1;
            } else {
                solved = solve_param_for_mean_n(templ, free_param_for(family), target, space, tol);
            }
            const StateVector psi = build_probe(space, solved, tol);
            row.param_json = probe_param_json(solved);
            row.stats = photon_stats(psi);
            const QfiResult res = qfi_point(DensityMatrix::from_state(psi), cfg.abs_lambda);
            row.qfi_sld = res.qfi_sld;
            row.qfi_bures = res.qfi_bures;
            row.purified_bound = res.purified_bound;
        } catch (const DephasimError& e) {
            row.error = e.what();
        }
    }

    int failures = 0;
    for (const QfiRow& row : rows)
        if (!row.error.empty()) ++failures;
    MetaExtras extra;
    extra.emplace_back("fock-dim", std::to_string(dim));
    extra.emplace_back("abs_lambda", format_g(cfg.abs_lambda));
    extra.emplace_back("axis", "mean_n " + format_g(ax.min) + ".." + format_g(ax.max) + " x" +
                                   std::to_string(ax.points));
    if (cfg.format == OutputFormat::Csv) {
        emit(cfg, qfi_csv(cfg, rows, true, extra));
    } else {
        ojson arr = ojson::array();
        for (const QfiRow& row : rows) {
            ojson r;
            r["probe_family"] = row.probe_family;
            r["param"] = ojson::parse(row.param_json);
            r["photon"] = photon_json(row.stats);
            r["abs_lambda"] = row.abs_lambda;
            auto num_or_null = [](double v) -> ojson {
                return std::isnan(v) ? ojson(nullptr) : ojson(v);
            };
            r["qfi_sld"] = num_or_null(row.qfi_sld);
            r["qfi_bures"] = num_or_null(row.qfi_bures);
            r["purified_bound"] = num_or_null(row.purified_bound);
            r["error"] = row.error;
            arr.push_back(std::move(r));
        }
        ojson data;
        data["rows"] = std::move(arr);
        data["failures"] = failures;
        emit(cfg, json_report(cfg, extra, data.dump(2)));
    }
    if (failures > 0)
        std::cerr << failures << " of " << total << " sweep points failed; see the error column\n";
    return failures == 0 ? 0 : 1;
}

int cmd_wigner(const RunConfig& cfg) {
    const Tolerances tol = run_tolerances(cfg);
    const std::vector<ProbeSpec> probes =
        cfg.wigner_probes.empty() ? default_wigner_probes() : cfg.wigner_probes;
    const std::string stem = cfg.out_path.empty() ? "wigner" : cfg.out_path;
    ojson cells = ojson::array();
    for (const ProbeSpec& spec : probes) {
        const int dim = resolve_dim(cfg, spec, tol);
        const DensityMatrix rho0 = DensityMatrix::from_state(build_probe(FockSpace(dim), spec, tol));
        for (double kt : cfg.wigner_kappa_ts) {
            const DensityMatrix rho = apply_closed_form(rho0, kt);
            const PhaseSpaceGrid grid =
                cfg.grid.r_max > 0.0
                    ? PhaseSpaceGrid(cfg.grid.r_max, cfg.grid.n_radial, cfg.grid.n_angular)
                    : default_grid_for(rho, cfg.grid.n_radial, cfg.grid.n_angular);
            const WignerField field = wigner_grid(rho, grid);
            const std::string name =
                stem + "_" + family_name(spec.family) + "_kt" + format_g(kt);
            MetaExtras extra;
            extra.emplace_back("probe", probe_param_json(spec));
            extra.emplace_back("fock-dim", std::to_string(dim));
            extra.emplace_back("kappa_t", format_g(kt));
            extra.emplace_back("grid", format_g(grid.r_max) + " x" +
                                           std::to_string(grid.n_radial) + " x" +
                                           std::to_string(grid.n_angular));
            write_file(name + ".csv", wigner_field_csv(cfg, field, extra));
            write_file(name + ".bin", wigner_field_binary(field));
            std::cerr << "wrote " << name << ".csv and .bin\n";
            // Metrics come from denser grids than the emitted field so the
            // summary numbers are certified rather than plot-resolution.
            const std::vector<double> marg =
                converged_angular_marginal(rho, grid.r_max, grid.n_angular);
            const WignerField fine =
                wigner_grid(rho, PhaseSpaceGrid(grid.r_max, 2048, grid.n_angular));
            double min_w = fine.values[0];
            for (double v : fine.values) min_w = std::min(min_w, v);
            ojson cell;
            cell["probe"] = probe_json(spec);
            cell["kappa_t"] = kt;
            cell["dim"] = dim;
            cell["r_max"] = grid.r_max;
            cell["files"] = {name + ".csv", name + ".bin"};
            cell["normalization"] = field_normalization(fine);
            cell["negativity_volume"] = negativity_volume(fine);
            cell["min_w"] = min_w;
            cell["uniformity_defect"] = uniformity_defect(marg);
            cell["circular_variance"] = circular_variance(marg);
            cells.push_back(std::move(cell));
        }
    }
    ojson data;
    data["cells"] = std::move(cells);
    MetaExtras extra;
    extra.emplace_back("kappa_ts", [&] {
        std::string s;
        for (std::size_t i = 0; i < cfg.wigner_kappa_ts.size(); ++i)
            s += (i ? " " : "") + format_g(cfg.wigner_kappa_ts[i]);
        return s;
    }());
    const std::string summary = json_report(cfg, extra, data.dump(2));
    if (cfg.out_path.empty()) {
        std::cout << summary;
    } else {
        write_file(stem + "_summary.json", summary);
        std::cerr << "wrote " << stem << "_summary.json\n";
    }
    return 0;
}

int cmd_purify_check(const RunConfig& cfg) {
    const Tolerances tol = run_tolerances(cfg);
    const int dim = resolve_dim(cfg, cfg.probe, tol);
    const StateVector psi_c = build_probe(FockSpace(dim), cfg.probe, tol);
    const OptomechParams& p = cfg.optomech;
    const LambdaParam lam = lambda_param(p);
    const TwoModeState two = optomech_evolve(psi_c, p);
    const DensityMatrix reduced = reduced_cavity_state(two.state, two.dim_c, two.dim_m);
    const double kappa_t = lam.abs_lambda * lam.abs_lambda;
    const DensityMatrix closed = apply_closed_form(DensityMatrix::from_state(psi_c), kappa_t);
    double max_diff = 0.0;
    for (int n = 0; n < dim; ++n)
        for (int m = 0; m < dim; ++m)
            max_diff = std::max(max_diff, std::abs(std::abs(reduced.mat()(n, m)) -
                                                   std::abs(closed.mat()(n, m))));
    const PhotonStats st = photon_stats(psi_c);
    const double gen_var = generator_variance(psi_c, p);
    const double pref2 = p.g != 0.0 ? (lam.abs_lambda / p.g) * (lam.abs_lambda / p.g)
                                    : p.t * p.t;  // |lambda| = g t |j0| makes (t j0)^2 = (|l|/g)^2
    const double gen_var_from_moments = pref2 * st.mean_n2;
    const double purified = purified_qfi_lambda(psi_c);
    const double input_fidelity =
        uhlmann_fidelity(reduced, DensityMatrix::from_state(psi_c));

    ojson data;
    data["probe"] = probe_json(cfg.probe);
    data["dim"] = dim;
    data["dim_mech"] = two.dim_m;
    data["optomech"] = {{"g", p.g}, {"omega_m", p.omega_m}, {"omega_c", p.omega_c}, {"t", p.t}};
    data["lambda"] = {lam.lambda.real(), lam.lambda.imag()};
    data["abs_lambda"] = lam.abs_lambda;
    data["kappa_t"] = kappa_t;
    data["max_modulus_discrepancy"] = max_diff;
    data["generator_variance"] = gen_var;
    data["generator_variance_from_moments"] = gen_var_from_moments;
    data["generator_variance_gap"] = std::abs(gen_var - gen_var_from_moments);
    data["photon"] = photon_json(st);
    data["purified_qfi_lambda"] = purified;
    data["input_fidelity"] = input_fidelity;
    ojson bound;
    bound["inequality"] = "(delta abs_lambda)^2 >= 1/mean_n2";
    try {
        bound["qcrb_abs_lambda"] = qcrb(psi_c, p, QcrbTarget::AbsLambda);
    } catch (const ZeroInformation& e) {
        bound["qcrb_abs_lambda"] = nullptr;
        bound["note"] = e.what();
    }
    try {
        bound["qcrb_g"] = qcrb(psi_c, p, QcrbTarget::G);
    } catch (const ZeroInformation& e) {
        bound["qcrb_g"] = nullptr;
        bound["note_g"] = e.what();
    }
    data["qcrb"] = std::move(bound);
    MetaExtras extra;
    extra.emplace_back("fock-dim", std::to_string(dim));
    emit(cfg, json_report(cfg, extra, data.dump(2)));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    // Pin the BLAS thread count before any LAPACK call; untracked threading
    // inside the library would break byte-identical reruns.
    setenv("OPENBLAS_NUM_THREADS", "1", 1);

    CLI::App app{"Truncated-Fock dephasing channel workbench"};
    app.require_subcommand(1);

    std::string config_path, out_path, format_s, representation_s;
    int dim = -1, jobs = -1;
    bool strict = false;
    double kappa_t = std::nan(""), abs_lambda = std::nan("");

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON configuration file");
        sub->add_option("--out", out_path, "output path (default: stdout)");
        sub->add_option("--dim", dim, "Fock cutoff (0 = automatic)")
            ->check(CLI::Range(0, 4096));
        sub->add_option("--format", format_s, "output format")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--jobs", jobs, "worker threads for sweeps")->check(CLI::Range(1, 256));
        sub->add_flag("--strict", strict, "escalate truncation warnings to errors");
    };

    CLI::App* c_state = app.add_subcommand("state", "build a probe state and emit it");
    CLI::App* c_evolve =
        app.add_subcommand("evolve", "apply the dephasing channel to a probe");
    CLI::App* c_wigner =
        app.add_subcommand("wigner", "emit Wigner fields and phase-marginal metrics");
    CLI::App* c_qfi = app.add_subcommand("qfi", "quantum Fisher information at one point");
    CLI::App* c_sweep =
        app.add_subcommand("sweep", "information sweep over probe families vs mean photon number");
    CLI::App* c_purify =
        app.add_subcommand("purify-check", "two-mode purification consistency report");
    for (CLI::App* sub : {c_state, c_evolve, c_wigner, c_qfi, c_sweep, c_purify})
        add_common(sub);
    c_evolve->add_option("--representation", representation_s, "channel representation")
        ->check(CLI::IsMember({"closed", "kraus", "lindblad", "phase-average"}));
    c_evolve->add_option("--kappa-t", kappa_t, "dephasing strength kappa*t");
    c_qfi->add_option("--abs-lambda", abs_lambda, "estimation point |lambda|");
    c_sweep->add_option("--abs-lambda", abs_lambda, "estimation point |lambda|");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg =
            config_path.empty() ? RunConfig{} : load_config_file(config_path);
        cfg.command = command_from_name(app.get_subcommands().at(0)->get_name());
        if (!out_path.empty()) cfg.out_path = out_path;
        if (dim >= 0) {
            if (dim == 1) throw ConfigError("dim: must be 0 (automatic) or >= 2");
            cfg.dim = dim;
        }
        if (!format_s.empty()) cfg.format = format_from_name(format_s);
        if (jobs >= 1) cfg.jobs = jobs;
        if (strict) cfg.strict = true;
        if (!representation_s.empty())
            cfg.representation = representation_from_name(representation_s);
        if (!std::isnan(kappa_t)) {
            if (kappa_t < 0.0) throw ConfigError("kappa-t: must be >= 0");
            cfg.kappa_t = kappa_t;
        }
        if (!std::isnan(abs_lambda)) {
            if (!(abs_lambda > 0.0)) throw ConfigError("abs-lambda: must be > 0");
            cfg.abs_lambda = abs_lambda;
        }
#ifdef _OPENMP
        omp_set_num_threads(cfg.jobs);
#endif
        switch (cfg.command) {
            case Command::State: return cmd_state(cfg);
            case Command::Evolve: return cmd_evolve(cfg);
            case Command::Wigner: return cmd_wigner(cfg);
            case Command::Qfi: return cmd_qfi(cfg);
            case Command::Sweep: return cmd_sweep(cfg);
            case Command::PurifyCheck: return cmd_purify_check(cfg);
        }
        return 3;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DephasimError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
