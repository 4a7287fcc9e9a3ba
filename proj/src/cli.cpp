#include "rfeig/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "rfeig/errors.hpp"
#include "rfeig/report.hpp"
#include "rfeig/solvers.hpp"

namespace rfeig {

namespace {

namespace fs = std::filesystem;

Complex parse_complex_pair(const std::string& text) {
    const std::size_t comma = text.find(',');
    if (comma == std::string::npos)
        throw CLI::ValidationError("expected 're,im', got '" + text + "'");
    return Complex(std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1)));
}

struct SolveArgs {
    std::string a_path;
    std::string m_path;
    std::string center = "0,0";
    double radius = 1.0;
    std::string algorithm = "alg3";
    std::size_t n_poles = 16;
    std::size_t parts = 8;
    std::size_t psi = 1;
    std::string phi = "auto";
    double rf_tol = 1e-12;
    std::size_t rf_maxit = 400;
    std::uint64_t seed = 1;
    double spurious_tol = 1e-3;
    std::size_t rsi_m = 0;
    double rsi_tol = 1e-10;
    std::size_t rsi_maxit = 50;
    unsigned threads = 1;
    std::string out_dir = ".";
    bool dump_vectors = false;
};

int do_solve(const SolveArgs& args) {
    Disk disk{parse_complex_pair(args.center), args.radius};
    SolverConfig config;
    config.disk = disk;
    config.n_poles = args.n_poles;
    config.parts = args.parts;
    config.psi = args.psi;
    config.phi = args.phi == "auto" ? kAutoPhi : std::stoul(args.phi);
    config.range_finder.ratio_tol = args.rf_tol;
    config.range_finder.max_iterations = args.rf_maxit;
    config.range_finder.seed = args.seed;
    config.spurious_tol = args.spurious_tol;
    config.rsi_subspace = args.rsi_m;
    config.rsi_tol = args.rsi_tol;
    config.rsi_max_iterations = args.rsi_maxit;
    config.threads = args.threads;

    OrderedJson echo;
    echo["a"] = args.a_path;
    echo["m"] = args.m_path.empty() ? "identity (assumed)" : args.m_path;
    echo["center"] = args.center;
    echo["radius"] = args.radius;
    echo["alg"] = args.algorithm;
    echo["n_poles"] = args.n_poles;
    echo["parts"] = args.parts;
    echo["psi"] = args.psi;
    echo["phi"] = args.phi;
    echo["rf_tol"] = args.rf_tol;
    echo["rf_maxit"] = args.rf_maxit;
    echo["seed"] = args.seed;
    echo["spurious_tol"] = args.spurious_tol;
    if (args.algorithm == "rsi") {
        echo["rsi_m"] = args.rsi_m;
        echo["rsi_tol"] = args.rsi_tol;
        echo["rsi_maxit"] = args.rsi_maxit;
    }
    echo["threads"] = args.threads;

    fs::create_directories(args.out_dir);
    const fs::path out_dir(args.out_dir);

    SparseMatrix a;
    try {
        a = read_matrix_market(args.a_path);
    } catch (const Error& e) {
        std::cerr << "error reading " << args.a_path << ": " << e.what() << "\n";
        return 2;
    }
    SparseMatrix m;
    if (args.m_path.empty()) {
        m = SparseMatrix::identity(a.rows());
    } else {
        try {
            m = read_matrix_market(args.m_path);
        } catch (const Error& e) {
            std::cerr << "error reading " << args.m_path << ": " << e.what() << "\n";
            return 2;
        }
    }
    if (a.rows() != a.cols() || m.rows() != m.cols() || a.rows() != m.rows()) {
        std::cerr << "error: A and M must be square with matching dimension\n";
        return 2;
    }
    const SparsePencil pencil(std::move(a), std::move(m));

    EigenReport report;
    try {
        if (args.algorithm == "alg2")
            report = algorithm2(pencil, config);
        else if (args.algorithm == "alg3")
            report = algorithm3(pencil, config);
        else if (args.algorithm == "alg4")
            report = algorithm4(pencil, config);
        else
            report = rsi(pencil, config);
    } catch (const Error& e) {
        // Numerical failure: record it in the report rather than crash bare.
        write_text_file((out_dir / "report.json").string(),
                        report_to_json(EigenReport{}, echo, e.what()).dump(2) + "\n");
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }

    write_text_file((out_dir / "report.json").string(),
                    report_to_json(report, echo).dump(2) + "\n");
    write_text_file((out_dir / "eigenvalues.csv").string(), eigenvalues_csv(report));
    if (args.dump_vectors && !report.accepted.empty()) {
        fs::create_directories(out_dir / "vectors");
        DenseMatrix vectors(report.accepted.front().vector.size(), report.accepted.size());
        for (std::size_t j = 0; j < report.accepted.size(); ++j)
            vectors.set_col(j, report.accepted[j].vector);
        write_matrix_market_dense(vectors, (out_dir / "vectors" / "ritz_vectors.mtx").string());
    }
    std::cout << "accepted " << report.accepted.size() << " eigenpairs ("
              << report.spurious_count << " spurious purged); report in " << args.out_dir
              << "\n";
    return 0;
}

struct FilterGridArgs {
    std::size_t n_poles = 16;
    std::string center = "0,0";
    double radius = 1.0;
    std::string box = "-2,2,-2,2";
    std::size_t resolution = 200;
    std::string out_path;
};

int do_filter_grid(const FilterGridArgs& args) {
    const Disk disk{parse_complex_pair(args.center), args.radius};
    const QuadratureRule rule = trapezoidal_rule(disk, args.n_poles);
    GridSpec spec;
    std::istringstream box(args.box);
    char sep = ',';
    if (!(box >> spec.x_min >> sep >> spec.x_max >> sep >> spec.y_min >> sep >> spec.y_max))
        throw CLI::ValidationError("expected --box x0,x1,y0,y1");
    spec.nx = spec.ny = args.resolution;
    const auto table = filter_grid(rule, spec);

    char line[96];
    std::string tsv;
    std::snprintf(line, sizeof(line), "# N=%zu center=%.17g,%.17g radius=%.17g\n", args.n_poles,
                  disk.center.real(), disk.center.imag(), disk.radius);
    tsv += line;
    for (const GridPoint& point : table) {
        std::snprintf(line, sizeof(line), "%.12g\t%.12g\t%.12g\n", point.x, point.y,
                      point.modulus);
        tsv += line;
    }
    if (args.out_path.empty())
        std::cout << tsv;
    else
        write_text_file(args.out_path, tsv);
    return 0;
}

struct SynthArgs {
    std::size_t n = 200;
    std::size_t inside = 10;
    std::string rings;
    std::string center = "0,0";
    double radius = 1.0;
    std::size_t bandwidth = 4;
    std::string mass = "identity";
    std::uint64_t seed = 1;
    std::string out_dir = ".";
};

int do_synth(const SynthArgs& args) {
    SynthOptions options;
    options.n = args.n;
    options.inside_count = args.inside;
    options.disk = Disk{parse_complex_pair(args.center), args.radius};
    options.bandwidth = args.bandwidth;
    options.identity_mass = args.mass == "identity";
    options.seed = args.seed;
    if (!args.rings.empty()) {
        // count:lo:hi groups separated by commas, radii in disk units.
        options.outside_rings.clear();
        std::istringstream all(args.rings);
        std::string group;
        while (std::getline(all, group, ',')) {
            SpectrumRing ring;
            if (std::sscanf(group.c_str(), "%zu:%lf:%lf", &ring.count, &ring.radius_min,
                            &ring.radius_max) != 3)
                throw CLI::ValidationError("expected --rings count:lo:hi[,count:lo:hi...]");
            options.outside_rings.push_back(ring);
        }
    }
    const SynthPencil synth = make_planted_pencil(options);

    fs::create_directories(args.out_dir);
    const fs::path out_dir(args.out_dir);
    write_matrix_market(synth.pencil.a, (out_dir / "a.mtx").string());
    if (!options.identity_mass)
        write_matrix_market(synth.pencil.m, (out_dir / "m.mtx").string());

    std::string truth = "re(lambda),im(lambda),inside\n";
    char line[96];
    for (std::size_t i = 0; i < synth.eigenvalues.size(); ++i) {
        const bool inside = options.disk.contains(synth.eigenvalues[i]);
        std::snprintf(line, sizeof(line), "%.17g,%.17g,%d\n", synth.eigenvalues[i].real(),
                      synth.eigenvalues[i].imag(), inside ? 1 : 0);
        truth += line;
    }
    write_text_file((out_dir / "truth.csv").string(), truth);

    OrderedJson meta;
    meta["n"] = args.n;
    meta["inside"] = args.inside;
    meta["center"] = args.center;
    meta["radius"] = args.radius;
    meta["bandwidth"] = args.bandwidth;
    meta["mass"] = args.mass;
    meta["seed"] = args.seed;
    write_text_file((out_dir / "meta.json").string(), meta.dump(2) + "\n");
    std::cout << "wrote planted pencil (n=" << args.n << ", inside=" << args.inside << ") to "
              << args.out_dir << "\n";
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"rational-filter eigensolver for non-Hermitian pencils"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    CLI::App* solve = app.add_subcommand("solve", "compute eigenpairs inside a disk");
    solve->add_option("--a", solve_args.a_path, "Matrix Market file for A")->required();
    solve->add_option("--m", solve_args.m_path, "Matrix Market file for M (default: identity)");
    solve->add_option("--center", solve_args.center, "disk center as re,im");
    solve->add_option("--radius", solve_args.radius, "disk radius")
        ->check(CLI::PositiveNumber);
    solve->add_option("--alg", solve_args.algorithm, "alg2 | alg3 | alg4 | rsi")
        ->check(CLI::IsMember({"alg2", "alg3", "alg4", "rsi"}));
    solve->add_option("--n-poles", solve_args.n_poles, "quadrature order N")
        ->check(CLI::Range(std::size_t(2), std::size_t(4096)));
    solve->add_option("--parts", solve_args.parts, "graph partition count p")
        ->check(CLI::Range(std::size_t(2), std::size_t(1 << 20)));
    solve->add_option("--psi", solve_args.psi, "resolvent series truncation");
    solve->add_option("--phi", solve_args.phi, "deflated interior eigenpairs, or 'auto'");
    solve->add_option("--rf-tol", solve_args.rf_tol, "range finder ratio tolerance");
    solve->add_option("--rf-maxit", solve_args.rf_maxit, "range finder iteration cap");
    solve->add_option("--seed", solve_args.seed, "random seed");
    solve->add_option("--spurious-tol", solve_args.spurious_tol, "residual purge threshold");
    solve->add_option("--rsi-m", solve_args.rsi_m, "subspace dimension for rsi");
    solve->add_option("--rsi-tol", solve_args.rsi_tol, "rsi residual target");
    solve->add_option("--rsi-maxit", solve_args.rsi_maxit, "rsi sweep cap");
    solve->add_option("--threads", solve_args.threads, "pole-level concurrency cap");
    solve->add_option("--out", solve_args.out_dir, "output directory");
    solve->add_flag("--dump-vectors", solve_args.dump_vectors,
                    "write Ritz vectors as a Matrix Market array file");

    FilterGridArgs grid_args;
    CLI::App* grid = app.add_subcommand("filter-grid", "sample |rho| over a rectangle");
    grid->add_option("--n", grid_args.n_poles, "quadrature order N")
        ->check(CLI::Range(std::size_t(2), std::size_t(4096)));
    grid->add_option("--center", grid_args.center, "disk center as re,im");
    grid->add_option("--radius", grid_args.radius, "disk radius")->check(CLI::PositiveNumber);
    grid->add_option("--box", grid_args.box, "sample box x0,x1,y0,y1");
    grid->add_option("--res", grid_args.resolution, "samples per axis")
        ->check(CLI::Range(std::size_t(2), std::size_t(100000)));
    grid->add_option("--out", grid_args.out_path, "output TSV path (default: stdout)");

    SynthArgs synth_args;
    CLI::App* synth = app.add_subcommand("synth", "generate a planted-spectrum pencil");
    synth->add_option("--n", synth_args.n, "dimension")->check(CLI::PositiveNumber);
    synth->add_option("--inside", synth_args.inside, "eigenvalues planted inside the disk");
    synth->add_option("--rings", synth_args.rings,
                      "outside rings count:lo:hi[,...] in disk-radius units");
    synth->add_option("--center", synth_args.center, "disk center as re,im");
    synth->add_option("--radius", synth_args.radius, "disk radius")->check(CLI::PositiveNumber);
    synth->add_option("--bandwidth", synth_args.bandwidth, "triangular band width");
    synth->add_option("--mass", synth_args.mass, "identity | banded")
        ->check(CLI::IsMember({"identity", "banded"}));
    synth->add_option("--seed", synth_args.seed, "random seed");
    synth->add_option("--out", synth_args.out_dir, "output directory");

    std::string fetch_name, fetch_cache, fetch_url;
    CLI::App* fetch = app.add_subcommand("fetch", "download a named test matrix");
    fetch->add_option("--name", fetch_name, "matrix name, e.g. utm1700b")->required();
    fetch->add_option("--cache", fetch_cache, "cache directory (default: $RFEIG_CACHE)");
    fetch->add_option("--url", fetch_url, "explicit download URL");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (solve->parsed()) {
            if (solve_args.algorithm == "rsi" && solve_args.rsi_m == 0) {
                std::cerr << "rsi requires --rsi-m >= 1\n";
                return 2;
            }
            return do_solve(solve_args);
        }
        if (grid->parsed()) return do_filter_grid(grid_args);
        if (synth->parsed()) return do_synth(synth_args);
        if (fetch->parsed()) {
            const std::string cache = fetch_cache.empty() ? default_cache_dir() : fetch_cache;
            const std::string path = fetch_matrix(fetch_name, cache, fetch_url);
            std::cout << path << "\n";
            return 0;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid numeric argument: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 3;
    }
    return 2;
}

}  // namespace rfeig
