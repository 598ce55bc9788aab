// pfde: integrate delayed reaction-diffusion systems, estimate principal
// spectra along minimal-set samples, and apply the block persistence rule.
//
// Exit codes: 0 ok, 1 failed property suite, 2 config error, 3 numerical
// blowup, 4 zero-section sampling requested but f(omega, x, 0, 0) != 0.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pfde/config.hpp"
#include "pfde/parallel.hpp"
#include "pfde/report.hpp"

namespace fs = std::filesystem;
using namespace pfde;

namespace {

constexpr const char* kVersion = "pfde 0.1.0";

enum ExitCode { kOk = 0, kFailedProperty = 1, kConfigError = 2, kBlowup = 3, kZeroSection = 4 };

std::uint64_t hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return fnv1a64(buf.str());
}

RunManifest make_manifest(const std::string& command, const std::string& config,
                          std::uint64_t seed, const std::string& out_dir,
                          std::map<std::string, std::string> overrides) {
    RunManifest m;
    m.command = command;
    m.config_path = config;
    m.config_hash = hash_file(config);
    m.seed = seed;
    m.output_dir = out_dir;
    m.overrides = std::move(overrides);
    m.tool_version = kVersion;
    return m;
}

std::vector<double> snapshot_grid(double T, int count, double h) {
    std::vector<double> times;
    for (int i = 0; i <= count; ++i) {
        double t = T * i / count;
        double snapped = std::llround(t / h) * h;
        if (times.empty() || snapped > times.back() + 1e-12) times.push_back(snapped);
    }
    return times;
}

ProblemSpec::InitialShape shape_from(const std::string& s) {
    if (s == "auto") return ProblemSpec::InitialShape::Auto;
    if (s == "constant") return ProblemSpec::InitialShape::Constant;
    if (s == "sine") return ProblemSpec::InitialShape::Sine;
    if (s == "bump") return ProblemSpec::InitialShape::Bump;
    throw ConfigError("unknown initial shape '" + s + "'");
}

struct SimulateArgs {
    std::string config, out = "out", save_state, from_state, shape = "auto";
    double T = 10.0, phi0 = 0.0;
    std::uint64_t seed = 12345;
    int snapshots = 16;
};

int cmd_simulate(const SimulateArgs& a) {
    ProblemPtr p = share(load_problem_config(a.config));
    fs::create_directories(a.out);
    RunManifest manifest = make_manifest(
        "simulate", a.config, a.seed, a.out,
        {{"T", format_double(a.T)},
         {"snapshots", std::to_string(a.snapshots)},
         {"phi0", format_double(a.phi0)},
         {"phi0_shape", a.shape}});
    manifest.write((fs::path(a.out) / "manifest.txt").string());

    DriverState omega = p->driver;
    Segment phi = p->make_initial_segment(a.phi0, shape_from(a.shape));
    double t_offset = 0.0;
    if (!a.from_state.empty()) {
        SavedState s = load_state(a.from_state, *p);
        omega = s.omega;
        phi = s.phi;
        t_offset = s.t;
    }

    Trajectory tr = integrate(p, omega, phi, a.T, snapshot_grid(a.T, a.snapshots, p->h()));
    write_trajectory_csv((fs::path(a.out) / "trajectory.csv").string(), manifest, tr);
    if (!a.save_state.empty() && !tr.blowup_time())
        save_state(a.save_state, *p, tr.driver_at(tr.t_end()), t_offset + tr.t_end(),
                   segment_at(tr, tr.t_end()));
    if (tr.blowup_time()) {
        std::ofstream rep(fs::path(a.out) / "blowup.txt");
        rep << "blowup_last_valid_time = " << format_double(*tr.blowup_time()) << "\n";
        std::cerr << "numerical blowup; last valid time " << format_double(*tr.blowup_time())
                  << "\n";
        return kBlowup;
    }
    return kOk;
}

struct AnalyzeArgs {
    std::string config, out = "out", k_mode = "zero-section";
    double tol = 1e-2, T = 60.0, window = 5.0, skip = 50.0, spacing = 2.0, phi0 = 0.1;
    int grid = 16, samples = 8, empirical = 0;
    double empirical_T = 40.0;
    std::uint64_t seed = 12345;
};

KSampler sampler_from(const AnalyzeArgs& a, const ProblemSpec& p) {
    if (a.k_mode == "zero-section") return KSampler::zero_section(a.grid);
    if (a.k_mode == "omega-limit")
        return KSampler::omega_limit(p.make_initial_segment(a.phi0), a.skip, a.samples,
                                     a.spacing);
    throw ConfigError("--k-mode must be zero-section or omega-limit");
}

int cmd_analyze(const AnalyzeArgs& a) {
    ProblemPtr p = share(load_problem_config(a.config));
    fs::create_directories(a.out);
    RunManifest manifest = make_manifest(
        "analyze", a.config, a.seed, a.out,
        {{"k_mode", a.k_mode},
         {"tol", format_double(a.tol)},
         {"T", format_double(a.T)},
         {"window", format_double(a.window)},
         {"grid", std::to_string(a.grid)},
         {"empirical", std::to_string(a.empirical)}});
    manifest.write((fs::path(a.out) / "manifest.txt").string());

    KSampler sampler = sampler_from(a, *p);
    LyapunovParams params;
    params.T = a.T;
    params.window = a.window;

    SampledK K = sample_K(p, sampler, params.T);
    InteractionMatrix M = interaction_matrix(K);
    BlockStructure bs = block_triangularize(M);

    std::vector<int> needed = bs.I;
    for (int j : bs.J)
        if (std::find(needed.begin(), needed.end(), j) == needed.end()) needed.push_back(j);
    std::sort(needed.begin(), needed.end());

    std::vector<SpectrumEstimate> spectra;
    for (int j : needed) {
        SpectrumEstimate est = principal_spectrum(K, bs.blocks[j], params);
        est.block = j;
        spectra.push_back(std::move(est));
    }
    Verdict verdict = classify_persistence(bs, spectra, a.tol);

    PersistenceReport empirical;
    bool have_empirical = false;
    if (a.empirical > 0 && sampler.mode == KSampler::Mode::ZeroSection) {
        empirical = empirical_persistence(p, bs, verdict, a.empirical, a.empirical_T, a.seed);
        have_empirical = true;
    }

    write_matrix_csv((fs::path(a.out) / "matrix.csv").string(), manifest, M);
    write_spectrum_csv((fs::path(a.out) / "spectrum.csv").string(), manifest, spectra);
    write_analysis_report((fs::path(a.out) / "report.txt").string(), manifest, *p, sampler, M, bs,
                          spectra, verdict, have_empirical ? &empirical : nullptr);
    std::cout << "k = " << bs.k() << ", uniformly_persistent = "
              << (verdict.uniformly_persistent ? "true" : "false")
              << ", strictly_persistent_at_zero = "
              << (verdict.strictly_persistent_at_zero ? "true" : "false") << "\n";
    return kOk;
}

struct CheckArgs {
    std::string config, out = "out", suite;
    std::uint64_t seed = 12345;
    int cases = 0;  // 0: per-suite default
    double T = 0.0, box_lo = 0.0, box_hi = 2.0;
};

int cmd_check(const CheckArgs& a) {
    ProblemPtr p = share(load_problem_config(a.config));
    fs::create_directories(a.out);
    RunManifest manifest = make_manifest("check", a.config, a.seed, a.out,
                                         {{"suite", a.suite},
                                          {"cases", std::to_string(a.cases)},
                                          {"T", format_double(a.T)}});
    manifest.write((fs::path(a.out) / "manifest.txt").string());

    std::vector<CheckRow> rows;
    bool all_pass = true;
    Rng rng(a.seed);

    if (a.suite == "quasimonotone") {
        int samples = a.cases > 0 ? a.cases : 10000;
        SampleBox box = SampleBox::uniform(p->n, a.box_lo, a.box_hi);
        QuasimonotoneReport rep = check_quasimonotone(*p, samples, box, a.seed);
        rows.push_back({"quasimonotone", 0, rep.pass, rep.worst, -1e-12});
        all_pass = rep.pass;
        if (!rep.pass)
            std::cerr << "quasimonotone violation " << format_double(rep.worst) << " at x="
                      << format_double(rep.witness_x) << " (i=" << rep.witness_i + 1
                      << ", j=" << rep.witness_j + 1
                      << (rep.witness_delayed ? ", delayed" : "") << ")\n";
    } else if (a.suite == "monotone") {
        int cases = a.cases > 0 ? a.cases : 100;
        double T = a.T > 0 ? a.T : 5.0;
        std::vector<std::pair<Segment, Segment>> pairs;
        for (int c = 0; c < cases; ++c) pairs.push_back(random_ordered_pair(*p, rng, 0.0, 0.5));
        auto results = check_monotonicity(p, pairs, T);
        for (const auto& r : results) {
            rows.push_back({"monotone", r.pair_id, r.pass, r.worst_violation, 1e-8});
            all_pass = all_pass && r.pass;
        }
    } else if (a.suite == "comparison") {
        int cases = a.cases > 0 ? a.cases : 25;
        double T = a.T > 0 ? a.T : 3.0;
        for (int c = 0; c < cases; ++c) {
            auto [phi, psi] = random_ordered_pair(*p, rng, 0.0, 0.5);
            ComparisonReport rep = check_comparison(p, p->driver, phi, psi, T, c);
            rows.push_back({"comparison", c, rep.pass, rep.worst_margin, rep.tolerance});
            all_pass = all_pass && rep.pass;
        }
    } else if (a.suite == "linearization") {
        int cases = a.cases > 0 ? a.cases : 20;
        double T = a.T > 0 ? a.T : 1.0;
        const double eps = 1e-4;
        for (int c = 0; c < cases; ++c) {
            Segment phi = random_segment(*p, rng, 0.1, 0.5);
            Segment psi = random_segment(*p, rng, -0.5, 0.5);
            double r1 = directional_derivative_check(p, p->driver, phi, psi, T, eps);
            double r2 = directional_derivative_check(p, p->driver, phi, psi, T, eps / 2);
            bool exact = r1 <= 1e-10 && r2 <= 1e-10;
            double ratio = exact ? 2.0 : r1 / r2;
            bool pass = exact || (ratio >= 1.8 && ratio <= 2.2);
            rows.push_back({"linearization", c, pass, ratio, 0.2});
            all_pass = all_pass && pass;
        }
    } else {
        throw ConfigError("--suite must be quasimonotone, monotone, comparison or linearization");
    }

    write_checks_csv((fs::path(a.out) / "checks.csv").string(), manifest, rows);
    return all_pass ? kOk : kFailedProperty;
}

struct SpectrumArgs {
    std::string config, out = "out", k_mode = "zero-section", block = "all";
    double T = 60.0, window = 5.0, skip = 50.0, spacing = 2.0, phi0 = 0.1;
    int grid = 16, samples = 8;
    std::uint64_t seed = 12345;
};

int cmd_spectrum(const SpectrumArgs& a) {
    ProblemPtr p = share(load_problem_config(a.config));
    fs::create_directories(a.out);
    RunManifest manifest = make_manifest("spectrum", a.config, a.seed, a.out,
                                         {{"k_mode", a.k_mode},
                                          {"T", format_double(a.T)},
                                          {"window", format_double(a.window)},
                                          {"block", a.block}});
    manifest.write((fs::path(a.out) / "manifest.txt").string());

    AnalyzeArgs shim;
    shim.k_mode = a.k_mode;
    shim.grid = a.grid;
    shim.skip = a.skip;
    shim.samples = a.samples;
    shim.spacing = a.spacing;
    shim.phi0 = a.phi0;
    KSampler sampler = sampler_from(shim, *p);
    LyapunovParams params;
    params.T = a.T;
    params.window = a.window;

    SampledK K = sample_K(p, sampler, params.T);
    InteractionMatrix M = interaction_matrix(K);
    BlockStructure bs = block_triangularize(M);

    std::vector<int> wanted;
    if (a.block == "all") {
        for (int b = 0; b < bs.k(); ++b) wanted.push_back(b);
    } else {
        int b = std::stoi(a.block) - 1;
        if (b < 0 || b >= bs.k())
            throw ConfigError("--block out of range; analysis found k = " + std::to_string(bs.k()));
        wanted.push_back(b);
    }

    std::vector<SpectrumEstimate> spectra;
    for (int b : wanted) {
        SpectrumEstimate est = principal_spectrum(K, bs.blocks[b], params);
        est.block = b;
        std::cout << "block " << b + 1 << ": [" << format_double(est.lower) << ", "
                  << format_double(est.upper) << "]\n";
        spectra.push_back(std::move(est));
    }
    write_spectrum_csv((fs::path(a.out) / "spectrum.csv").string(), manifest, spectra);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    parallel::configure_from_env();
    CLI::App app{"delayed reaction-diffusion persistence analysis"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    SimulateArgs sim;
    CLI::App* simulate = app.add_subcommand("simulate", "integrate one trajectory");
    simulate->add_option("config", sim.config)->required();
    simulate->add_option("--T", sim.T);
    simulate->add_option("--snapshots", sim.snapshots);
    simulate->add_option("--out", sim.out);
    simulate->add_option("--phi0", sim.phi0);
    simulate->add_option("--phi0-shape", sim.shape);
    simulate->add_option("--seed", sim.seed);
    simulate->add_option("--save-state", sim.save_state);
    simulate->add_option("--from-state", sim.from_state);

    AnalyzeArgs ana;
    CLI::App* analyze = app.add_subcommand("analyze", "full persistence pipeline");
    analyze->add_option("config", ana.config)->required();
    analyze->add_option("--k-mode", ana.k_mode);
    analyze->add_option("--tol", ana.tol);
    analyze->add_option("--out", ana.out);
    analyze->add_option("--T", ana.T);
    analyze->add_option("--window", ana.window);
    analyze->add_option("--grid", ana.grid);
    analyze->add_option("--skip", ana.skip);
    analyze->add_option("--samples", ana.samples);
    analyze->add_option("--spacing", ana.spacing);
    analyze->add_option("--phi0", ana.phi0);
    analyze->add_option("--empirical", ana.empirical);
    analyze->add_option("--empirical-T", ana.empirical_T);
    analyze->add_option("--seed", ana.seed);

    CheckArgs chk;
    CLI::App* check = app.add_subcommand("check", "property suites");
    check->add_option("config", chk.config)->required();
    check->add_option("--suite", chk.suite)->required();
    check->add_option("--seed", chk.seed);
    check->add_option("--cases", chk.cases);
    check->add_option("--T", chk.T);
    check->add_option("--box-lo", chk.box_lo);
    check->add_option("--box-hi", chk.box_hi);
    check->add_option("--out", chk.out);

    SpectrumArgs spc;
    CLI::App* spectrum = app.add_subcommand("spectrum", "principal spectrum per block");
    spectrum->add_option("config", spc.config)->required();
    spectrum->add_option("--k-mode", spc.k_mode);
    spectrum->add_option("--block", spc.block);
    spectrum->add_option("--T", spc.T);
    spectrum->add_option("--window", spc.window);
    spectrum->add_option("--grid", spc.grid);
    spectrum->add_option("--skip", spc.skip);
    spectrum->add_option("--samples", spc.samples);
    spectrum->add_option("--spacing", spc.spacing);
    spectrum->add_option("--phi0", spc.phi0);
    spectrum->add_option("--seed", spc.seed);
    spectrum->add_option("--out", spc.out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*simulate) return cmd_simulate(sim);
        if (*analyze) return cmd_analyze(ana);
        if (*check) return cmd_check(chk);
        if (*spectrum) return cmd_spectrum(spc);
    } catch (const ZeroSectionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kZeroSection;
    } catch (const BlowupError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBlowup;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    }
    return kOk;
}
