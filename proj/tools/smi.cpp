// Command-line front end: simulation, inference and evaluation pipelines
// over CSV files. Every command is deterministic given its full argument
// list; exit codes are 0 (success), 1 (I/O failure), 2 (invalid input).

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "smi/baselines.hpp"
#include "smi/csv.hpp"
#include "smi/eds.hpp"
#include "smi/metrics.hpp"
#include "smi/model.hpp"
#include "smi/vb.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct GridFlags {
    double qmin = 0.1;
    double qmax = 5.0;
    std::size_t qbins = 200;
    double rmin = 0.2;
    double rmax = 60.0;
    double rstep = 0.2;
};

void add_q_flags(CLI::App* cmd, GridFlags& flags) {
    cmd->add_option("--qmin", flags.qmin, "Smallest wavenumber");
    cmd->add_option("--qmax", flags.qmax, "Largest wavenumber");
    cmd->add_option("--qbins", flags.qbins, "Number of wavenumber bins");
}

void add_r_flags(CLI::App* cmd, GridFlags& flags) {
    cmd->add_option("--rmin", flags.rmin, "Smallest radius (nm)");
    cmd->add_option("--rmax", flags.rmax, "Largest radius (nm)");
    cmd->add_option("--rstep", flags.rstep, "Radius step (nm)");
}

smi::ComponentLabels radii_from_flags(const GridFlags& flags) {
    if (!(flags.rstep > 0.0) || !(flags.rmax >= flags.rmin))
        throw std::invalid_argument("radius grid: need rstep > 0 and rmax >= rmin");
    // largest count with rmin + (count-1)*rstep <= rmax, tolerant of fp slop
    const auto count =
        static_cast<std::size_t>(std::floor((flags.rmax - flags.rmin) / flags.rstep + 1e-9)) + 1;
    return smi::radii_arithmetic(flags.rmin, flags.rstep, count);
}

smi::SasPreset preset_from_name(const std::string& name) {
    if (name == "plateau") return smi::SasPreset::plateau;
    if (name == "two-peak") return smi::SasPreset::two_peak;
    if (name == "three-peak") return smi::SasPreset::three_peak;
    throw std::invalid_argument("unknown preset '" + name + "'");
}

std::vector<smi::GammaPart> parts_from_flags(const std::vector<std::string>& raw) {
    std::vector<smi::GammaPart> parts;
    for (const auto& token : raw) {
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const auto pos = token.find(':', start);
            if (pos == std::string::npos) {
                fields.push_back(token.substr(start));
                break;
            }
            fields.push_back(token.substr(start, pos - start));
            start = pos + 1;
        }
        if (fields.size() != 3)
            throw std::invalid_argument("--part expects mix:shape:scale, got '" + token + "'");
        parts.push_back({smi::parse_double(fields[0], "--part"),
                         smi::parse_double(fields[1], "--part"),
                         smi::parse_double(fields[2], "--part")});
    }
    return parts;
}

fs::path prepare_out_dir(const std::string& out) {
    fs::path dir(out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw smi::IoError("cannot create output directory '" + out + "': " + ec.message());
    return dir;
}

json grid_json(const smi::WaveGrid& grid) {
    return json{{"min", grid.q.front()}, {"max", grid.q.back()}, {"bins", grid.size()}};
}

void emit(const json& report) {
    std::cout << report.dump(2) << "\n";
}

// ---------------------------------------------------------------- simulate

struct SimulateSasOpts {
    std::string preset = "two-peak";
    std::vector<std::string> parts;
    std::uint64_t events = 50000;
    std::uint64_t seed = 0;
    std::string out = ".";
    GridFlags grid;
};

void run_simulate_sas(const SimulateSasOpts& opts) {
    if (opts.events == 0)
        throw std::invalid_argument("simulate-sas: --events must be >= 1");

    const auto grid = smi::WaveGrid::linear(opts.grid.qmin, opts.grid.qmax, opts.grid.qbins);
    const auto radii = radii_from_flags(opts.grid);
    // relative-intensity convention: rows scaled to unit mass, so the truth
    // weights parametrize the same mixture the estimators solve
    const auto basis = smi::build_sas_basis(grid, radii).row_normalized();

    std::vector<smi::GammaPart> parts;
    if (!opts.parts.empty())
        parts = parts_from_flags(opts.parts);
    else {
        const auto span = smi::sas_preset_parts(preset_from_name(opts.preset));
        parts.assign(span.begin(), span.end());
    }

    const auto truth = smi::gamma_mixture_weights(radii, parts);
    const auto p = smi::superpose(basis, truth);

    std::vector<double> expected_counts(p.size());
    for (std::size_t k = 0; k < p.size(); ++k)
        expected_counts[k] = static_cast<double>(opts.events) * p[k];
    const auto expected = smi::Smi::from_counts(grid, expected_counts);
    const auto sampled = smi::sample_events(grid, p, opts.events, opts.seed);

    const auto dir = prepare_out_dir(opts.out);
    smi::save_weights((dir / "truth_weights.csv").string(), truth);
    smi::save_basis((dir / "basis.csv").string(), basis);
    smi::save_spectrum((dir / "expected_spectrum.csv").string(), expected);
    smi::save_spectrum((dir / "spectrum.csv").string(), sampled);

    json report;
    report["command"] = "simulate-sas";
    if (opts.parts.empty()) report["preset"] = opts.preset;
    json jparts = json::array();
    for (const auto& part : parts)
        jparts.push_back({{"mix", part.mix}, {"shape", part.shape}, {"scale", part.scale}});
    report["parts"] = jparts;
    report["events"] = opts.events;
    report["seed"] = opts.seed;
    report["q"] = grid_json(grid);
    report["radii"] = {{"min", opts.grid.rmin}, {"max", opts.grid.rmax},
                       {"step", opts.grid.rstep}, {"count", radii.size()}};
    report["total_counts"] = sampled.total();
    report["out"] = opts.out;
    report["files"] = {"truth_weights.csv", "basis.csv", "expected_spectrum.csv", "spectrum.csv"};
    emit(report);
}

// -------------------------------------------------------------- build-basis

struct BuildBasisOpts {
    std::string kind = "sas";
    std::size_t elements = 20;
    std::uint64_t seed = 0;
    std::string out = ".";
    GridFlags grid;
    bool eds_grid_defaults = true;
};

void run_build_basis(BuildBasisOpts opts) {
    const auto dir = prepare_out_dir(opts.out);
    json report;
    report["command"] = "build-basis";
    report["kind"] = opts.kind;

    if (opts.kind == "sas") {
        const auto grid = smi::WaveGrid::linear(opts.grid.qmin, opts.grid.qmax, opts.grid.qbins);
        const auto radii = radii_from_flags(opts.grid);
        const auto basis = smi::build_sas_basis(grid, radii);
        smi::save_basis((dir / "basis.csv").string(), basis);
        report["q"] = grid_json(grid);
        report["components"] = radii.size();
    } else if (opts.kind == "synth-eds") {
        if (opts.eds_grid_defaults) {
            opts.grid.qmin = 0.2;
            opts.grid.qmax = 10.0;
            opts.grid.qbins = 1024;
        }
        const auto grid = smi::WaveGrid::linear(opts.grid.qmin, opts.grid.qmax, opts.grid.qbins);
        const auto basis = smi::synth_eds_basis(opts.elements, grid, opts.seed);
        smi::save_basis((dir / "basis.csv").string(), basis);
        report["q"] = grid_json(grid);
        report["components"] = opts.elements;
        report["seed"] = opts.seed;
    } else {
        throw std::invalid_argument("build-basis: --kind must be sas or synth-eds");
    }
    report["out"] = opts.out;
    report["files"] = {"basis.csv"};
    emit(report);
}

// -------------------------------------------------------------------- infer

struct InferOpts {
    std::string method;
    std::string basis_path;
    std::string spectrum_path;
    double alpha0 = 1.0;
    int max_iter = 1000;
    double tol = 1e-9;  // relative alpha / likelihood change; 0 disables
    std::string out = ".";
    bool iter_flags_given = false;
};

void run_infer(const InferOpts& opts) {
    const auto basis = smi::load_basis(opts.basis_path);
    const auto spectrum = smi::load_spectrum(opts.spectrum_path);
    if (spectrum.grid != basis.grid())
        throw std::invalid_argument("infer: basis and spectrum wave grids differ");
    if (opts.alpha0 < 0.0)
        throw std::invalid_argument("infer: --alpha0 must be >= 0");

    const auto dir = prepare_out_dir(opts.out);
    json report;
    report["command"] = "infer";
    report["config"] = {{"method", opts.method},     {"basis", opts.basis_path},
                        {"spectrum", opts.spectrum_path}, {"alpha0", opts.alpha0},
                        {"max_iter", opts.max_iter}, {"tol", opts.tol},
                        {"out", opts.out}};

    const auto t0 = std::chrono::steady_clock::now();
    smi::WeightDistribution weights{};

    if (opts.method == "vb") {
        const std::vector<double> alpha0(basis.num_components(), opts.alpha0);
        const auto vb = smi::run_vb(spectrum, basis, alpha0, opts.max_iter, opts.tol);
        weights = smi::posterior_mean(vb.posterior);
        report["iterations"] = vb.iterations;
        report["converged"] = vb.converged;
        report["final_delta"] = vb.final_delta;
        report["alpha"] = vb.posterior.alpha;
    } else if (opts.method == "ml") {
        const auto em = smi::em_ml(spectrum, basis, opts.max_iter, opts.tol);
        weights = em.weights;
        report["iterations"] = em.iterations;
        report["converged"] = em.iterations < opts.max_iter;
        if (em.log_likelihood_trace.size() >= 2) {
            const double last = em.log_likelihood_trace.back();
            const double prev = em.log_likelihood_trace[em.log_likelihood_trace.size() - 2];
            report["final_delta"] = std::abs(last - prev) / std::max(1.0, std::abs(last));
        }
        report["log_likelihood_trace"] = em.log_likelihood_trace;
    } else if (opts.method == "svd") {
        if (opts.iter_flags_given)
            std::cerr << "warning: svd ignores --alpha0/--max-iter/--tol\n";
        weights = smi::svd_pinv_weights(spectrum, basis);
        int negatives = 0;
        for (double v : weights.w)
            if (v < 0.0) ++negatives;
        report["unconstrained"] = true;
        report["negative_entries"] = negatives;
    } else {
        throw std::invalid_argument("infer: --method must be vb, ml or svd");
    }

    // log-likelihood of the point estimate; null when it is not a simplex
    bool simplex = !weights.unconstrained;
    if (weights.unconstrained) {
        double sum = 0.0;
        bool negative = false;
        for (double v : weights.w) {
            sum += v;
            negative = negative || v < 0.0;
        }
        simplex = !negative && std::abs(sum - 1.0) <= 1e-9;
    }
    if (simplex) {
        const auto as_simplex = weights.unconstrained
            ? smi::WeightDistribution::simplex(weights.components, weights.w)
            : weights;
        report["log_likelihood"] = smi::log_likelihood(spectrum, basis, as_simplex);
    } else {
        report["log_likelihood"] = nullptr;
    }

    const auto t1 = std::chrono::steady_clock::now();
    report["wall_time_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();

    smi::save_weights((dir / "weights.csv").string(), weights);
    std::ofstream os(dir / "report.json");
    if (!os)
        throw smi::IoError("infer: cannot write report.json");
    os << report.dump(2) << "\n";
    emit(report);
}

// ------------------------------------------------------------------- eval

struct EvalSasOpts {
    std::string truth_path;
    std::string inferred_path;
};

void run_eval_sas(const EvalSasOpts& opts) {
    const auto truth = smi::load_weights(opts.truth_path);
    const auto inferred = smi::load_weights(opts.inferred_path);
    if (truth.components != inferred.components)
        throw std::invalid_argument("eval-sas: component grids differ");

    json report;
    report["command"] = "eval-sas";
    report["l1"] = smi::l1_distance(truth.w, inferred.w);
    report["l2"] = smi::l2_distance(truth.w, inferred.w);
    report["tv_truth"] = smi::total_variation(truth.w);
    report["tv_inferred"] = smi::total_variation(inferred.w);
    emit(report);
}

struct EvalEdsOpts {
    std::string basis_path;
    std::string manifest_path;
    std::string method = "vb";
    double noise = 0.0;
    std::uint64_t events = 10000;
    std::string seeds = "0..0";
    double alpha0 = 1.0;
    int max_iter = 100;
    double tol = 0.0;
    unsigned jobs = 1;
    std::string out;
};

std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& text) {
    const auto pos = text.find("..");
    if (pos == std::string::npos) {
        const auto v = static_cast<std::uint64_t>(std::stoull(text));
        return {v, v};
    }
    const auto first = static_cast<std::uint64_t>(std::stoull(text.substr(0, pos)));
    const auto last = static_cast<std::uint64_t>(std::stoull(text.substr(pos + 2)));
    if (last < first)
        throw std::invalid_argument("--seeds: range end precedes start");
    return {first, last};
}

void run_eval_eds(const EvalEdsOpts& opts) {
    const auto basis = smi::load_basis(opts.basis_path);
    const auto manifest = smi::load_manifest(opts.manifest_path);
    if (manifest.empty())
        throw std::invalid_argument("eval-eds: manifest lists no compounds");
    if (opts.method != "vb" && opts.method != "ml" && opts.method != "svd")
        throw std::invalid_argument("eval-eds: --method must be vb, ml or svd");

    // validate labels and k up front
    for (const auto& entry : manifest) {
        for (const auto& part : entry.parts) {
            const auto& labels = basis.components().labels;
            if (std::find(labels.begin(), labels.end(), part.label) == labels.end())
                throw std::invalid_argument("eval-eds: unknown label '" + part.label +
                                            "' in compound '" + entry.compound + "'");
        }
        if (entry.k > basis.num_components())
            throw std::invalid_argument("eval-eds: k exceeds component count for '" +
                                        entry.compound + "'");
    }

    const auto [seed_first, seed_last] = parse_seed_range(opts.seeds);
    const std::size_t n_seeds = static_cast<std::size_t>(seed_last - seed_first + 1);
    const std::size_t n_tasks = n_seeds * manifest.size();

    struct TaskResult {
        std::uint64_t seed = 0;
        std::string compound;
        smi::IdentificationResult id;
    };
    std::vector<TaskResult> results(n_tasks);

    auto run_task = [&](std::size_t t) {
        const std::size_t si = t / manifest.size();
        const std::size_t ci = t % manifest.size();
        const auto& entry = manifest[ci];
        const std::uint64_t seed = seed_first + si;
        const std::uint64_t stream = seed * 1000003ull + ci;

        const auto spectrum =
            smi::make_compound_spectrum(basis, entry.parts, opts.events, opts.noise, stream);

        smi::WeightDistribution weights{};
        if (opts.method == "vb") {
            const std::vector<double> alpha0(basis.num_components(), opts.alpha0);
            weights = smi::posterior_mean(
                smi::run_vb(spectrum, basis, alpha0, opts.max_iter, opts.tol).posterior);
        } else if (opts.method == "ml") {
            weights = smi::em_ml(spectrum, basis, opts.max_iter, opts.tol).weights;
        } else {
            weights = smi::svd_pinv_weights(spectrum, basis);
        }

        std::vector<std::string> truth;
        for (const auto& part : entry.parts) truth.push_back(part.label);
        results[t] = {seed, entry.compound,
                      smi::IdentificationResult::make(
                          smi::identify_elements(weights, entry.k), truth)};
    };

    if (opts.jobs <= 1) {
        for (std::size_t t = 0; t < n_tasks; ++t) run_task(t);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const unsigned n_threads = std::min<unsigned>(opts.jobs, n_tasks);
        for (unsigned j = 0; j < n_threads; ++j)
            pool.emplace_back([&] {
                while (true) {
                    const std::size_t t = next.fetch_add(1);
                    if (t >= n_tasks) break;
                    run_task(t);
                }
            });
        for (auto& th : pool) th.join();
    }

    auto join = [](const std::vector<std::string>& v) {
        std::string s;
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (j) s += ';';
            s += v[j];
        }
        return s;
    };

    // human-readable table, one row per seed in the shape of the paper table
    std::cout << "method: " << opts.method << "  events: " << opts.events
              << "  noise: " << smi::format_double_shortest(opts.noise) << "\n";
    int total_correct = 0;
    for (std::size_t si = 0; si < n_seeds; ++si) {
        int seed_correct = 0;
        std::ostringstream row;
        row << "seed " << seed_first + si << ": ";
        for (std::size_t ci = 0; ci < manifest.size(); ++ci) {
            const auto& r = results[si * manifest.size() + ci];
            row << r.compound << "=" << join(r.id.predicted)
                << (r.id.correct ? " ok" : " X") << "  ";
            if (r.id.correct) ++seed_correct;
        }
        row << "score " << seed_correct << "/" << manifest.size();
        std::cout << row.str() << "\n";
        total_correct += seed_correct;
    }
    std::cout << "aggregate: " << total_correct << "/" << n_tasks << "\n";

    if (!opts.out.empty()) {
        const auto dir = prepare_out_dir(opts.out);
        std::ofstream os(dir / "scores.csv");
        if (!os)
            throw smi::IoError("eval-eds: cannot write scores.csv");
        os << "seed,compound,k,truth,predicted,correct\n";
        for (std::size_t si = 0; si < n_seeds; ++si)
            for (std::size_t ci = 0; ci < manifest.size(); ++ci) {
                const auto& r = results[si * manifest.size() + ci];
                os << r.seed << ',' << r.compound << ',' << manifest[ci].k << ','
                   << join(r.id.truth) << ',' << join(r.id.predicted) << ','
                   << (r.id.correct ? 1 : 0) << '\n';
            }
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"smi: decomposition of superimposed multispectral intensities"};
    app.require_subcommand(1);

    SimulateSasOpts sim;
    auto* sim_cmd = app.add_subcommand("simulate-sas",
                                       "Simulate a small-angle-scattering experiment");
    sim_cmd->add_option("--preset", sim.preset, "plateau, two-peak or three-peak");
    sim_cmd->add_option("--part", sim.parts,
                        "Gamma part mix:shape:scale (repeatable, overrides --preset)");
    sim_cmd->add_option("--events", sim.events, "Detection events to sample");
    sim_cmd->add_option("--seed", sim.seed, "Sampling seed");
    sim_cmd->add_option("--out", sim.out, "Output directory")->required();
    add_q_flags(sim_cmd, sim.grid);
    add_r_flags(sim_cmd, sim.grid);
    sim_cmd->callback([&] { run_simulate_sas(sim); });

    BuildBasisOpts bb;
    auto* bb_cmd = app.add_subcommand("build-basis", "Write a component basis CSV");
    bb_cmd->add_option("--kind", bb.kind, "sas or synth-eds");
    bb_cmd->add_option("--elements", bb.elements, "Synthetic element count (synth-eds)");
    bb_cmd->add_option("--seed", bb.seed, "Generator seed (synth-eds)");
    bb_cmd->add_option("--out", bb.out, "Output directory")->required();
    auto* bb_qmin = bb_cmd->add_option("--qmin", bb.grid.qmin, "Smallest wavenumber");
    auto* bb_qmax = bb_cmd->add_option("--qmax", bb.grid.qmax, "Largest wavenumber");
    auto* bb_qbins = bb_cmd->add_option("--qbins", bb.grid.qbins, "Number of wavenumber bins");
    add_r_flags(bb_cmd, bb.grid);
    bb_cmd->callback([&] {
        bb.eds_grid_defaults = bb_qmin->count() == 0 && bb_qmax->count() == 0 &&
                               bb_qbins->count() == 0;
        run_build_basis(bb);
    });

    InferOpts inf;
    auto* inf_cmd = app.add_subcommand("infer", "Infer component weights from a spectrum");
    inf_cmd->add_option("--method", inf.method, "vb, ml or svd")->required();
    inf_cmd->add_option("--basis", inf.basis_path, "Basis CSV")->required();
    inf_cmd->add_option("--spectrum", inf.spectrum_path, "Spectrum CSV")->required();
    auto* inf_alpha0 = inf_cmd->add_option("--alpha0", inf.alpha0, "Uniform Dirichlet prior (vb)");
    auto* inf_maxit = inf_cmd->add_option("--max-iter", inf.max_iter, "Iteration cap (vb/ml)");
    auto* inf_tol = inf_cmd->add_option("--tol", inf.tol, "Convergence tolerance (vb/ml)");
    inf_cmd->add_option("--out", inf.out, "Output directory")->required();
    inf_cmd->callback([&] {
        inf.iter_flags_given =
            inf_alpha0->count() > 0 || inf_maxit->count() > 0 || inf_tol->count() > 0;
        run_infer(inf);
    });

    EvalSasOpts evs;
    auto* evs_cmd = app.add_subcommand("eval-sas", "Compare inferred weights with the truth");
    evs_cmd->add_option("--truth", evs.truth_path, "Truth weights CSV")->required();
    evs_cmd->add_option("--inferred", evs.inferred_path, "Inferred weights CSV")->required();
    evs_cmd->callback([&] { run_eval_sas(evs); });

    EvalEdsOpts eve;
    auto* eve_cmd = app.add_subcommand("eval-eds",
                                       "Score compound identification over seeded spectra");
    eve_cmd->add_option("--basis", eve.basis_path, "Basis CSV")->required();
    eve_cmd->add_option("--manifest", eve.manifest_path, "Compound manifest CSV")->required();
    eve_cmd->add_option("--method", eve.method, "vb, ml or svd");
    eve_cmd->add_option("--noise", eve.noise, "Background noise level");
    eve_cmd->add_option("--events", eve.events, "Detection events per spectrum");
    eve_cmd->add_option("--seeds", eve.seeds, "Seed range, e.g. 0..9");
    eve_cmd->add_option("--alpha0", eve.alpha0, "Uniform Dirichlet prior (vb)");
    eve_cmd->add_option("--max-iter", eve.max_iter, "Iteration cap (vb/ml)");
    eve_cmd->add_option("--tol", eve.tol, "Convergence tolerance (vb/ml)");
    eve_cmd->add_option("--jobs", eve.jobs, "Worker threads over (compound, seed) tasks");
    eve_cmd->add_option("--out", eve.out, "Directory for scores.csv");
    eve_cmd->callback([&] { run_eval_eds(eve); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const smi::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
