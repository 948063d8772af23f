// Command line front end: symbol ingestion, realization, essential spectrum
// sweeps, exceptional set, resolvent queries, component classification, and
// the bundled reference examples.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "toepspec/example_checks.hpp"
#include "toepspec/toepspec.hpp"

namespace fs = std::filesystem;
using namespace toepspec;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitCheckFailed = 4;

RationalMatrix load_symbol(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    return symbol_from_json(j);
}

std::string stem_of(const std::string& path) {
    const std::string stem = fs::path(path).stem().string();
    return stem.empty() ? "symbol" : stem;
}

cplx parse_lambda(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        throw ParseError("--lambda expects RE,IM");
    try {
        return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw ParseError("--lambda expects RE,IM");
    }
}

json pole_set_json(const PoleSet& ps) {
    auto list = [](const std::vector<RootCluster>& poles) {
        json out = json::array();
        for (const RootCluster& p : poles)
            out.push_back(json{{"pole", complex_to_json(p.value)},
                               {"multiplicity", p.multiplicity}});
        return out;
    };
    return json{{"inside", list(ps.inside)},
                {"on_circle", list(ps.on_circle)},
                {"outside", list(ps.outside)}};
}

int cmd_realize(const std::string& file, const RunConfig& cfg) {
    const RationalMatrix sym = load_symbol(file);
    const Realization real = split_and_realize(sym, cfg.realize_options());
    const PoleSet poles = classify_poles(partial_fractions(sym), cfg.eps_circle);
    const GrowthReport growth = growth_bound_check(real, 32, cfg.eps_circle);

    const fs::path dir(cfg.out_dir);
    const std::string stem = stem_of(file);
    atomic_write_file(dir / (stem + "_realization.json"),
                      realization_to_json(real).dump(2) + "\n");
    const int J = 16;
    atomic_write_file(dir / (stem + "_markov.csv"), markov_csv(coeff_window(real, J)));

    std::cout << "n_plus = " << real.n_plus() << ", n_minus = " << real.n_minus()
              << "\n";
    std::cout << "poles: " << pole_set_json(poles).dump() << "\n";
    std::cout << "growth: M = " << growth.M << ", K = " << growth.K
              << ", bounded = " << (growth.ok ? "yes" : "no")
              << ", worst j = " << growth.worst_j << "\n";
    std::cout << "wrote " << (dir / (stem + "_realization.json")).string() << " and "
              << (dir / (stem + "_markov.csv")).string() << "\n";
    return 0;
}

struct SpectrumArtifacts {
    Realization real;
    EssCloud cloud;
    std::vector<cplx> e_points;
};

SpectrumArtifacts run_sweep(const RationalMatrix& sym, const RunConfig& cfg) {
    SpectrumArtifacts art;
    art.real = split_and_realize(sym, cfg.realize_options());
    art.cloud = ess_spectrum_sweep(art.real, cfg.n_theta);
    art.e_points = art.cloud.e_points;
    return art;
}

void write_cloud(const EssCloud& cloud, const fs::path& dir, const std::string& stem) {
    atomic_write_file(dir / (stem + "_ess.csv"), ess_cloud_csv(cloud));
    atomic_write_file(dir / (stem + "_ess.svg"), ess_cloud_svg(cloud));
    atomic_write_file(dir / (stem + "_ess.json"),
                      ess_cloud_sidecar_json(cloud).dump(2) + "\n");
}

json region_verdicts_json(const RegionMap& map) {
    json comps = json::array();
    for (const ComponentInfo& info : map.components) {
        json c = riccati_outcome_to_json(info.outcome, info.representative);
        c["component_id"] = info.id;
        c["cells"] = info.cells;
        c["label"] = to_string(info.label);
        c["touches_edge"] = info.touches_edge;
        comps.push_back(c);
    }
    json out{{"components", comps}, {"whole_plane", map.whole_plane}};
    if (map.farfield_probe)
        out["farfield"] = json{{"lambda", complex_to_json(map.farfield_probe->first)},
                               {"verdict", to_string(map.farfield_probe->second)}};
    return out;
}

void write_region(const RegionMap& map, const EssCloud& cloud, const fs::path& dir,
                  const std::string& stem) {
    atomic_write_file(dir / (stem + "_region.csv"), region_map_csv(map));
    atomic_write_file(dir / (stem + "_region.svg"), region_map_svg(map, cloud));
    atomic_write_file(dir / (stem + "_verdicts.json"),
                      region_verdicts_json(map).dump(2) + "\n");
}

int cmd_ess_spec(const std::string& file, const RunConfig& cfg) {
    const SpectrumArtifacts art = run_sweep(load_symbol(file), cfg);
    write_cloud(art.cloud, cfg.out_dir, stem_of(file));
    std::cout << "essential spectrum: "
              << (art.cloud.whole_plane ? "whole plane" : "curve samples written")
              << " (" << art.cloud.points.size() << " points)\n";
    return 0;
}

int cmd_e_set(const std::string& file, const RunConfig& cfg) {
    const RationalMatrix sym = load_symbol(file);
    const Realization real = split_and_realize(sym, cfg.realize_options());
    const std::vector<cplx> e = compute_E(detL_coeffs(assemble_L(real)));
    json out = json::array();
    for (const cplx& lam : e) out.push_back(complex_to_json(lam));
    atomic_write_file(fs::path(cfg.out_dir) / (stem_of(file) + "_eset.json"),
                      out.dump(2) + "\n");
    std::cout << "E(Omega) = " << out.dump() << "\n";
    return 0;
}

int cmd_resolvent(const std::string& file, const std::string& lambda_text,
                  const RunConfig& cfg) {
    const RationalMatrix sym = load_symbol(file);
    const cplx lambda = parse_lambda(lambda_text);
    const Realization real = split_and_realize(sym, cfg.realize_options());
    const RiccatiOutcome out =
        solve_stabilizing({real, lambda}, cfg.riccati_options());
    const json j = riccati_outcome_to_json(out, lambda);
    atomic_write_file(fs::path(cfg.out_dir) / (stem_of(file) + "_verdict.json"),
                      j.dump(2) + "\n");
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_classify(const std::string& file, const RunConfig& cfg) {
    const SpectrumArtifacts art = run_sweep(load_symbol(file), cfg);
    const RegionMap map =
        classify_components(art.cloud, art.real, cfg.classify_options());
    write_region(map, art.cloud, cfg.out_dir, stem_of(file));
    std::cout << "components: " << map.components.size() << "\n";
    for (const ComponentInfo& info : map.components)
        std::cout << "  #" << info.id << " at " << fmt_g17(info.representative.real())
                  << (info.representative.imag() < 0 ? "-" : "+")
                  << fmt_g17(std::abs(info.representative.imag())) << "i: "
                  << to_string(info.label) << " (" << info.outcome.certificate
                  << ")\n";
    return 0;
}

int cmd_spectrum(const std::string& file, const RunConfig& cfg) {
    const SpectrumArtifacts art = run_sweep(load_symbol(file), cfg);
    const std::string stem = stem_of(file);
    const fs::path dir(cfg.out_dir);
    write_cloud(art.cloud, dir, stem);
    json eset = json::array();
    for (const cplx& lam : art.e_points) eset.push_back(complex_to_json(lam));
    atomic_write_file(dir / (stem + "_eset.json"), eset.dump(2) + "\n");
    const RegionMap map =
        classify_components(art.cloud, art.real, cfg.classify_options());
    write_region(map, art.cloud, dir, stem);
    std::cout << "essential spectrum: "
              << (art.cloud.whole_plane ? "whole plane" : "curve samples written")
              << "\n";
    std::cout << "E(Omega): " << eset.dump() << "\n";
    std::cout << "components: " << map.components.size() << "\n";
    return 0;
}

int cmd_example(int id, const RunConfig& cfg) {
    const ExampleReport rep = run_example_checks(id, cfg, /*emit_figures=*/true);
    atomic_write_file(fs::path(cfg.out_dir) /
                          ("example" + std::to_string(id) + "_report.json"),
                      example_report_to_json(rep).dump(2) + "\n");
    for (const CheckResult& c : rep.checks)
        std::cout << (c.pass ? "PASS" : "FAIL") << "  " << c.name << " (expected "
                  << c.expected << ", observed " << c.observed << ")\n";
    if (!rep.all_pass()) {
        std::cerr << "example " << id << ": checks failed\n";
        return kExitCheckFailed;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"State space analysis of Toeplitz-like operators with rational "
                 "matrix symbols that may have poles on the unit circle"};
    app.require_subcommand(1);

    RunConfig cfg;
    app.add_option("--n-theta", cfg.n_theta, "unit circle sample count")
        ->capture_default_str();
    app.add_option("--grid-n", cfg.grid_n, "raster resolution per side")
        ->capture_default_str();
    app.add_option("--rank-tol", cfg.rank_tol, "relative SVD rank tolerance")
        ->capture_default_str();
    app.add_option("--ric-tol", cfg.ric_tol, "Riccati residual tolerance")
        ->capture_default_str();
    app.add_option("--seed", cfg.seed, "seed for randomized probes")
        ->capture_default_str();
    app.add_option("--out", cfg.out_dir, "output directory")->capture_default_str();

    std::string file, lambda_text;
    int example_id = 1;

    CLI::App* realize = app.add_subcommand("realize", "build a realization from a symbol");
    realize->add_option("symbol", file, "symbol JSON file")->required();
    realize->fallthrough();

    CLI::App* spectrum = app.add_subcommand("spectrum", "full pipeline: sweep, E set, classification");
    spectrum->add_option("symbol", file, "symbol JSON file")->required();
    spectrum->fallthrough();

    CLI::App* ess = app.add_subcommand("ess-spec", "essential spectrum sweep");
    ess->add_option("symbol", file, "symbol JSON file")->required();
    ess->fallthrough();

    CLI::App* eset = app.add_subcommand("e-set", "exceptional set E(Omega)");
    eset->add_option("symbol", file, "symbol JSON file")->required();
    eset->fallthrough();

    CLI::App* resolvent = app.add_subcommand("resolvent", "resolvent membership of one lambda");
    resolvent->add_option("symbol", file, "symbol JSON file")->required();
    resolvent->add_option("--lambda", lambda_text, "query point RE,IM")->required();
    resolvent->fallthrough();

    CLI::App* classify = app.add_subcommand("classify", "classify complement components");
    classify->add_option("symbol", file, "symbol JSON file")->required();
    classify->fallthrough();

    CLI::App* example = app.add_subcommand("example", "run a bundled reference example");
    example->add_option("id", example_id, "example id 1..5")
        ->required()
        ->check(CLI::Range(1, 5));
    example->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        cfg.validate();
        if (realize->parsed()) return cmd_realize(file, cfg);
        if (spectrum->parsed()) return cmd_spectrum(file, cfg);
        if (ess->parsed()) return cmd_ess_spec(file, cfg);
        if (eset->parsed()) return cmd_e_set(file, cfg);
        if (resolvent->parsed()) return cmd_resolvent(file, lambda_text, cfg);
        if (classify->parsed()) return cmd_classify(file, cfg);
        if (example->parsed()) return cmd_example(example_id, cfg);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return 0;
}
