/// @file polytherm.cpp
/// @brief Command-line front end: `verify` runs the property suites,
///        `simulate` runs a single configured run with diagnostics and
///        snapshots, `sweep` dispatches the limit/stability experiments.
///        Exit codes: 0 pass, 1 scientific failure, 2 usage/config error.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "polytherm/checks.hpp"
#include "polytherm/config.hpp"
#include "polytherm/csv.hpp"
#include "polytherm/fd.hpp"
#include "polytherm/harness.hpp"
#include "polytherm/kinematics.hpp"
#include "polytherm/snapshot.hpp"

namespace fs = std::filesystem;
using namespace polytherm;

namespace {

struct CliOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::vector<std::string> overrides;
    bool quiet = false;
};

RunConfig load_config(const CliOptions& opt) {
    RunConfig cfg = RunConfig::from_file(opt.config_path);
    for (const auto& kv : opt.overrides) cfg.apply_override(kv);
    return cfg;
}

void print_report(const CheckReport& rep, bool quiet) {
    if (quiet) return;
    for (const auto& r : rep.rows)
        std::cout << "[" << r.status << "] " << r.suite << "." << r.name
                  << "  value=" << format_double(r.value)
                  << " threshold=" << format_double(r.threshold)
                  << (r.detail.empty() ? "" : "  (" + r.detail + ")") << "\n";
}

void save_report(const CheckReport& rep, const fs::path& path) {
    CsvTable t;
    t.columns = {"suite", "check", "status", "value", "threshold", "detail"};
    for (const auto& r : rep.rows)
        t.add_row({r.suite, r.name, r.status, format_double(r.value),
                   format_double(r.threshold), r.detail});
    t.save(path.string());
}

template <int D>
CheckReport verify_kinematics(Rng& rng) {
    CheckReport rep;
    // algebraic identities on random matrices
    double worst_id = 0.0, worst_jac = 0.0;
    for (int i = 0; i < 200; ++i) {
        const Mat<D> f = sample_mat_ball<D>(rng, 2.0);
        const Mat<D> cof = cofactor(f);
        const double det = determinant(f);
        // cof(F)^T F = det F * I
        for (int r = 0; r < D; ++r)
            for (int c = 0; c < D; ++c) {
                double s = 0.0;
                for (int k = 0; k < D; ++k) s += cof(k, r) * f(k, c);
                worst_id = std::max(worst_id, std::abs(s - (r == c ? det : 0.0)));
            }
        worst_id = std::max(worst_id,
                            std::abs(determinant(cof) - std::pow(det, D - 1)));
        worst_jac = std::max(worst_jac, minors_jacobian_mismatch(f));
    }
    rep.add("kinematics", "cof_det_identities", worst_id < 1e-12 ? "PASS" : "FAIL", worst_id,
            1e-12);
    rep.add("kinematics", "minors_jacobian_fd", worst_jac < 1e-8 ? "PASS" : "FAIL", worst_jac,
            1e-8);

    // discrete Euler-Lagrange and transport identities at two resolutions
    auto displacement = [](const Grid<D>& g) {
        VecField<D> u;
        for (auto& comp : u) comp.assign(g.cells(), 0.0);
        for (std::int64_t c = 0; c < g.cells(); ++c) {
            const double x0 = g.coord(c, 0), x1 = g.coord(c, 1);
            u[0][c] = 0.05 * std::sin(2 * M_PI * x1) + 0.02 * std::cos(2 * M_PI * x0);
            u[1][c] = 0.04 * std::sin(2 * M_PI * x0);
        }
        return u;
    };
    const Grid<D> g1(16, 1.0), g2(32, 1.0);
    const double r1 = null_lagrangian_residual(g1, displacement(g1));
    const double r2 = null_lagrangian_residual(g2, displacement(g2));
    const double order = std::log2(r1 / r2);
    rep.add("kinematics", "euler_lagrange_refinement_order", order >= 1.9 ? "PASS" : "FAIL",
            order, 1.9);
    return rep;
}

template <int D>
CheckReport verify_constitutive(const FreeEnergy<D>& law, const TransportCoeffs& coeffs,
                                Rng& rng, double theta_floor) {
    CheckReport rep;
    double worst_law = 0.0, worst_stress = 0.0, worst_legendre = 0.0;
    std::vector<PointState<D>> samples;
    for (int i = 0; i < 1000; ++i) samples.push_back(sample_box<D>(rng));
    for (int i = 0; i < 200; ++i) {
        const PointState<D>& u = samples[i];
        worst_law = std::max(worst_law, law_derivative_mismatch(law, u.xi, u.theta));
        worst_stress =
            std::max(worst_stress, piola_stress_mismatch(law, u.xi.fmat(), u.theta));
        const double lg = law.psi(u.xi, u.theta) + u.theta * eta_hat(law, u.xi, u.theta) -
                          e_hat(law, u.xi, u.theta);
        worst_legendre = std::max(worst_legendre, std::abs(lg));
    }
    rep.add("constitutive", "derivatives_vs_fd", worst_law < 1e-6 ? "PASS" : "FAIL", worst_law,
            1e-6);
    rep.add("constitutive", "piola_stress_vs_fd", worst_stress < 1e-6 ? "PASS" : "FAIL",
            worst_stress, 1e-6);
    rep.add("constitutive", "internal_energy_identity", worst_legendre < 1e-12 ? "PASS" : "FAIL",
            worst_legendre, 1e-12);
    const Mat<D> eye = Mat<D>::identity();
    double rest_stress = 0.0;
    if (const auto* poly = dynamic_cast<const PolyconvexLaw<D>*>(&law)) {
        const Mat<D> sigma = piola_stress(law, eye, poly->params().theta0);
        rest_stress = frobenius(sigma);
        rep.add("constitutive", "stress_free_reference", rest_stress < 1e-12 ? "PASS" : "FAIL",
                rest_stress, 1e-12);
    }
    rep.merge(check_gibbs(law, samples));
    rep.merge(check_growth(law, rng));
    rep.merge(check_coeff_bounds(coeffs, law, rng, CoeffBoundMode::adiabatic_limit));
    if (coeffs.k0 > 0.0)
        rep.merge(check_coeff_bounds(coeffs, law, rng, CoeffBoundMode::zero_viscosity,
                                     theta_floor));
    return rep;
}

template <int D>
CheckReport verify_augmented(const FreeEnergy<D>& law, Rng& rng) {
    CheckReport rep;
    double worst_time = 0.0, worst_flux = 0.0, worst_sym = 0.0;
    std::vector<PointState<D>> gamma_samples;
    for (int i = 0; i < 1000; ++i) gamma_samples.push_back(sample_gamma<D>(rng, 3.0, 0.2));
    for (int i = 0; i < 50; ++i) {
        const PointState<D> u = sample_box<D>(rng);
        const auto [rt, rf] = entropy_pair_residual(law, u, 1e-5);
        worst_time = std::max(worst_time, rt);
        worst_flux = std::max(worst_flux, rf);
        const auto fd = fd_symmetrizer(law, u);
        const auto an = symmetrizer(law, u);
        double norm = 1e-300;
        for (double x : an) norm = std::max(norm, std::abs(x));
        for (std::size_t k = 0; k < an.size(); ++k)
            worst_sym = std::max(worst_sym, std::abs(fd[k] - an[k]) / norm);
    }
    rep.add("augmented", "entropy_pair_time_residual", worst_time < 1e-6 ? "PASS" : "FAIL",
            worst_time, 1e-6);
    rep.add("augmented", "entropy_pair_flux_residual", worst_flux < 1e-6 ? "PASS" : "FAIL",
            worst_flux, 1e-6);
    rep.add("augmented", "symmetrizer_vs_fd", worst_sym < 1e-5 ? "PASS" : "FAIL", worst_sym,
            1e-5);
    const auto cert = hyperbolicity_certificate<D>(law, gamma_samples);
    rep.add("augmented", "symmetrizer_positive_on_gamma", cert.pass ? "PASS" : "FAIL",
            cert.worst_ratio, 1e-10,
            "min eigenvalue " + format_double(cert.min_eigenvalue));
    return rep;
}

template <int D>
CheckReport verify_relentropy(const FreeEnergy<D>& law, const TransportCoeffs& coeffs,
                              std::uint64_t seed, double theta_floor, int pairs) {
    CheckReport rep;
    Rng rng(seed + 7);
    double min_i = 1e300, worst_self = 0.0;
    for (int i = 0; i < 500; ++i) {
        const PointState<D> u = sample_box<D>(rng);
        const PointState<D> ub = sample_gamma<D>(rng, 3.0, 0.2);
        min_i = std::min(min_i, rel_entropy_density(law, u, ub));
        worst_self = std::max(worst_self, std::abs(rel_entropy_density(law, u, u)));
    }
    rep.add("relentropy", "I_nonnegative_on_samples", min_i > -1e-10 ? "PASS" : "FAIL", min_i,
            -1e-10);
    rep.add("relentropy", "I_vanishes_on_diagonal", worst_self == 0.0 ? "PASS" : "FAIL",
            worst_self, 0.0);
    rep.merge(appendix_bounds_check(law, coeffs, seed + 11, pairs, 3.0, 0.2, theta_floor));
    return rep;
}

template <int D>
int cmd_verify(const RunConfig& cfg, const CliOptions& opt) {
    const std::uint64_t seed = static_cast<std::uint64_t>(cfg.get_int("seed", 12345));
    const double theta_floor = cfg.get_double("run.theta_floor", 0.5);
    const int pairs = cfg.get_int("verify.pairs", 2000);
    auto law = make_law<D>(law_from_config(cfg));
    const TransportCoeffs coeffs = coeffs_from_config(cfg);

    Rng rng(seed);
    CheckReport rep;
    rep.merge(verify_kinematics<D>(rng));
    rep.merge(verify_constitutive<D>(*law, coeffs, rng, theta_floor));
    rep.merge(verify_augmented<D>(*law, rng));
    rep.merge(verify_relentropy<D>(*law, coeffs, seed, theta_floor, pairs));

    print_report(rep, opt.quiet);
    save_report(rep, fs::path(opt.out_dir) / "verify_report.csv");
    if (!opt.quiet)
        std::cout << (rep.all_pass() ? "verify: all checks passed" : "verify: FAILURES present")
                  << "\n";
    return rep.all_pass() ? 0 : 1;
}

template <int D>
int cmd_simulate(const RunConfig& cfg, const CliOptions& opt) {
    const GridConfig gc = grid_from_config(cfg);
    const Grid<D> grid(gc.n, gc.length);
    auto law = make_law<D>(law_from_config(cfg));
    RunParams<D> rp = run_params_from_config<D>(cfg);
    const InitialParams init = initial_from_config(cfg);
    const double t_end = cfg.get_double("run.T", 0.25);
    const bool snapshots = cfg.get_int("output.snapshots", 1) != 0;

    const RunResult<D> res = run(grid, *law, rp, make_initial(grid, *law, init), t_end);

    CsvTable t;
    t.columns = {"t", "E_total", "S_total", "S_production_cum",
                 "constraint_drift", "involution_drift", "theta_min", "dt"};
    for (const auto& d : res.diagnostics)
        t.add_row({format_double(d.t), format_double(d.energy_total),
                   format_double(d.entropy_total), format_double(d.entropy_production_cum),
                   format_double(d.constraint_drift), format_double(d.involution_drift),
                   format_double(d.theta_min), format_double(d.dt)});
    t.save((fs::path(opt.out_dir) / "diagnostics.csv").string());

    if (snapshots) {
        for (std::size_t m = 0; m < res.traj.frames.size(); ++m) {
            Snapshot snap;
            snap.d = D;
            snap.n = grid.n;
            snap.t = res.traj.times[m];
            snap.fields = res.traj.frames[m].c;
            char name[64];
            std::snprintf(name, sizeof name, "snapshot_%04zu.bin", m);
            write_snapshot((fs::path(opt.out_dir) / name).string(), snap);
        }
    }
    if (res.aborted) {
        std::cerr << "simulate: run aborted: " << res.abort_reason << "\n"
                  << "state dump: the last emitted snapshot in " << opt.out_dir << "\n";
        return 1;
    }
    if (!opt.quiet)
        std::cout << "simulate: " << res.steps << " steps, " << res.traj.frames.size()
                  << " frames written to " << opt.out_dir << "\n";
    return 0;
}

template <int D>
int cmd_sweep(const RunConfig& cfg, const CliOptions& opt) {
    const GridConfig gc = grid_from_config(cfg);
    const Grid<D> grid(gc.n, gc.length);
    auto law = make_law<D>(law_from_config(cfg));

    SweepSpec spec;
    const std::string kind = cfg.get_string("experiment.kind", "adiabatic-limit");
    if (kind == "adiabatic-limit")
        spec.kind = ExperimentKind::adiabatic_limit;
    else if (kind == "zero-viscosity")
        spec.kind = ExperimentKind::zero_viscosity;
    else if (kind == "heat-to-adiabatic")
        spec.kind = ExperimentKind::heat_to_adiabatic;
    else if (kind == "perturbation-stability")
        spec.kind = ExperimentKind::perturbation_stability;
    else
        throw ConfigError("config: unknown experiment.kind " + kind);
    spec.ladder = cfg.get_list("experiment.ladder");
    spec.eps_ladder = cfg.get_list("experiment.eps_ladder");
    if (spec.ladder.empty()) spec.ladder = {1e-2, 5e-3, 2.5e-3};
    if (spec.eps_ladder.empty()) spec.eps_ladder = {1e-2, 1e-3};
    spec.fixed_k0 = cfg.get_double("experiment.fixed_k0", 1e-2);
    spec.coeff_kind = coeffs_from_config(cfg).kind;
    spec.init = initial_from_config(cfg);
    spec.t_end = cfg.get_double("run.T", 0.25);
    spec.frame_stride = cfg.get_int("run.frame_stride", 10);
    spec.ref_factor = cfg.get_int("experiment.ref_factor", 1);
    spec.theta_floor = cfg.get_double("run.theta_floor", 0.5);
    spec.hyperviscosity = cfg.get_double("run.hyperviscosity", 0.05);
    spec.emit_identity_series = cfg.get_int("experiment.identity_series", 1) != 0;

    const SweepResult result = run_sweep(spec, *law, grid);

    result.to_csv().save((fs::path(opt.out_dir) / "sweep.csv").string());
    {
        std::ofstream f(fs::path(opt.out_dir) / "summary.txt");
        f << result.summary_json();
    }
    {
        std::ofstream f(fs::path(opt.out_dir) / "plot_sweep.gp");
        f << result.plot_script("sweep.csv");
    }
    for (std::size_t i = 0; i < result.rungs.size(); ++i) {
        const auto& r = result.rungs[i];
        if (r.identity.t.empty()) continue;
        CsvTable t;
        t.columns = {"t", "I_integral", "diss_visc", "diss_heat", "residual_L1",
                     "residual_Linf"};
        for (std::size_t m = 0; m < r.identity.t.size(); ++m)
            t.add_row({format_double(r.identity.t[m]), format_double(r.identity.i_integral[m]),
                       format_double(r.identity.diss_visc[m]),
                       format_double(r.identity.diss_heat[m]),
                       format_double(r.identity.residual_l1[m]),
                       format_double(r.identity.residual_linf[m])});
        char name[64];
        std::snprintf(name, sizeof name, "relentropy_rung%02zu.csv", i);
        t.save((fs::path(opt.out_dir) / name).string());
    }
    if (!opt.quiet) {
        std::cout << "sweep: " << result.verdict << " (slope " << format_double(result.slope)
                  << ", monotone " << (result.monotone ? "yes" : "no") << ")\n";
        for (const auto& n : result.notes) std::cout << "  note: " << n << "\n";
    }
    return result.verdict == "FAIL" ? 1 : 0;
}

int dispatch(int (*f2)(const RunConfig&, const CliOptions&),
             int (*f3)(const RunConfig&, const CliOptions&), const CliOptions& opt) {
    try {
        const RunConfig cfg = load_config(opt);
        fs::create_directories(opt.out_dir);
        const int d = grid_from_config(cfg).d;
        return d == 2 ? f2(cfg, opt) : f3(cfg, opt);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polytherm: polyconvex thermoviscoelasticity laboratory"};
    app.require_subcommand(1);
    CliOptions opt;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "run configuration file")->required();
        sub->add_option("--out", opt.out_dir, "output directory");
        sub->add_option("--override", opt.overrides, "key=value override (repeatable)");
        sub->add_flag("--quiet", opt.quiet, "suppress progress output");
    };
    CLI::App* verify = app.add_subcommand("verify", "run the property suites");
    CLI::App* simulate = app.add_subcommand("simulate", "run one configured simulation");
    CLI::App* sweep = app.add_subcommand("sweep", "run a limit/stability experiment");
    add_common(verify);
    add_common(simulate);
    add_common(sweep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (verify->parsed()) return dispatch(cmd_verify<2>, cmd_verify<3>, opt);
    if (simulate->parsed()) return dispatch(cmd_simulate<2>, cmd_simulate<3>, opt);
    return dispatch(cmd_sweep<2>, cmd_sweep<3>, opt);
}
