#include "rfeig/solvers.hpp"

#include <algorithm>
#include <cmath>

#include "rfeig/errors.hpp"

namespace rfeig {

namespace {

DenseMatrix column_matrix(const std::vector<Complex>& v) {
    DenseMatrix m(v.size(), 1);
    m.set_col(0, v);
    return m;
}

// Z = blkdiag(W, G) stacked into the full space: W occupies the interior rows,
// G the interface rows.
DenseMatrix block_diagonal_basis(const DenseMatrix& w, const DenseMatrix& g, std::size_t d,
                                 std::size_t s) {
    DenseMatrix z(d + s, w.cols() + g.cols());
    for (std::size_t j = 0; j < w.cols(); ++j)
        for (std::size_t i = 0; i < d; ++i) z(i, j) = w(i, j);
    for (std::size_t j = 0; j < g.cols(); ++j)
        for (std::size_t i = 0; i < s; ++i) z(d + i, w.cols() + j) = g(i, j);
    return z;
}

// Ritz vectors of a reordered pencil put back into the original ordering.
void unpermute_vectors(EigenReport& report, const Permutation& perm) {
    for (RitzPair& pair : report.accepted) {
        std::vector<Complex> original(pair.vector.size());
        for (std::size_t i = 0; i < original.size(); ++i) original[i] = pair.vector[perm(i)];
        pair.vector = std::move(original);
    }
}

PartitionSummary summarize(const PartitionResult& partition) {
    PartitionSummary out;
    out.parts = partition.parts;
    out.interior_sizes = partition.interior_sizes;
    out.interface_sizes = partition.interface_sizes;
    out.interior_total = partition.interior_total;
    out.interface_total = partition.interface_total;
    out.edge_cut = partition.edge_cut;
    return out;
}

RangeFinderRun run_stats(const std::string& name, const RangeFinderResult& result) {
    RangeFinderRun run;
    run.name = name;
    run.iterations = result.iterations;
    run.basis_columns = result.basis.cols();
    run.final_ratio = result.final_ratio;
    run.converged = result.converged;
    run.ratio_history = result.ratio_history;
    return run;
}

double max_accepted_residual(const EigenReport& report) {
    double worst = 0.0;
    for (const auto& pair : report.accepted) worst = std::max(worst, pair.residual);
    return worst;
}

}  // namespace

EigenReport algorithm2(const SparsePencil& pencil, const SolverConfig& config) {
    SolveLedger ledger;
    std::map<std::string, double> seconds;
    const QuadratureRule rule = trapezoidal_rule(config.disk, config.n_poles);

    StopWatch factor_clock;
    FullResolventCache cache = build_full_cache(pencil, rule, config.threads);
    seconds["factor"] = factor_clock.seconds();
    cache.ledger = &ledger;
    cache.phase = "range";

    const LinearOperator op{
        pencil.n, pencil.n, [&](const std::vector<Complex>& r) {
            return cache.apply(column_matrix(r)).col_vector(0);
        }};
    StopWatch range_clock;
    const RangeFinderResult rf = randomized_range(op, config.range_finder);
    seconds["range"] = range_clock.seconds();

    StopWatch extract_clock;
    EigenReport report = extract(pencil, config.disk, rf.basis, config.spurious_tol);
    seconds["extract"] = extract_clock.seconds();

    report.ledger = ledger;
    report.range_finders.push_back(run_stats("filtered-operator", rf));
    report.phase_seconds = std::move(seconds);
    report.algorithm = "alg2";
    report.seed = config.range_finder.seed;
    return report;
}

EigenReport algorithm3(const SparsePencil& pencil, const SolverConfig& config) {
    SolveLedger ledger;
    std::map<std::string, double> seconds;

    StopWatch partition_clock;
    const PartitionedPencil part = partition_pencil(pencil, config.parts);
    seconds["partition"] = partition_clock.seconds();
    const std::size_t d = part.blocks.d;
    const std::size_t s = part.blocks.s;

    if (s == 0) {
        // Fully decoupled graph: every vertex is interior and the interface
        // operators are empty. The Schur splitting contributes nothing, so the
        // pencil is handled through the full filtered operator instead.
        EigenReport report = algorithm2(pencil, config);
        report.algorithm = "alg3";
        report.partition = summarize(part.partition);
        report.phase_seconds["partition"] = seconds["partition"];
        return report;
    }

    const QuadratureRule rule = trapezoidal_rule(config.disk, config.n_poles);
    StopWatch factor_clock;
    SchurCache cache = build_schur_cache(part, rule, &ledger, config.threads,
                                         config.interface_cap);
    seconds["factor"] = factor_clock.seconds();
    cache.ledger = &ledger;
    cache.phase = "range";

    // Joint range finders over the interface and coupling operators. Both sides
    // consume the same probe so each iteration costs one interface solve and
    // one interior solve per pole, and a shared iteration count.
    StopWatch range_clock;
    Rng rng(config.range_finder.seed);
    IncrementalQr interface_side(s);
    IncrementalQr coupling_side(d);
    const std::size_t cap = std::min(config.range_finder.max_iterations, s);
    std::size_t iterations = 0;
    std::size_t interface_stop = 0, coupling_stop = 0;  // iteration that tripped
    std::vector<double> interface_history, coupling_history;
    std::vector<Complex> probe(s);
    bool zero_operator = false;
    while (iterations < cap) {
        for (auto& z : probe) z = rng.complex_gaussian();
        const auto joint = cache.apply_joint(column_matrix(probe));
        ++iterations;
        if (iterations == 1 &&
            frobenius_norm(joint.interface_part) + frobenius_norm(joint.coupling_part) <=
                config.range_finder.ratio_tol * vector_norm(probe)) {
            zero_operator = true;
            break;
        }
        const double g_ratio = interface_side.append(joint.interface_part.col_vector(0));
        interface_history.push_back(g_ratio);
        if (interface_stop == 0 && g_ratio <= config.range_finder.ratio_tol)
            interface_stop = iterations;
        double w_ratio = 0.0;
        if (d > 0) {
            w_ratio = coupling_side.append(joint.coupling_part.col_vector(0));
            coupling_history.push_back(w_ratio);
        }
        if (coupling_stop == 0 && (d == 0 || w_ratio <= config.range_finder.ratio_tol))
            coupling_stop = iterations;
        if (interface_stop > 0 && coupling_stop > 0) break;
    }
    seconds["range"] = range_clock.seconds();

    const bool converged = zero_operator || (interface_stop > 0 && coupling_stop > 0) ||
                           iterations == std::min(cap, s);
    DenseMatrix g_basis =
        zero_operator ? DenseMatrix(s, 0)
                      : interface_side.basis(interface_stop > 0 ? interface_stop - 1
                                                                : interface_side.cols());
    DenseMatrix w_basis =
        (zero_operator || d == 0)
            ? DenseMatrix(d, 0)
            : coupling_side.basis(coupling_stop > 0 ? coupling_stop - 1 : coupling_side.cols());

    StopWatch extract_clock;
    const DenseMatrix z = block_diagonal_basis(w_basis, g_basis, d, s);
    EigenReport report = extract(part.reordered, config.disk, z, config.spurious_tol);
    unpermute_vectors(report, part.partition.permutation);
    seconds["extract"] = extract_clock.seconds();

    report.ledger = ledger;
    RangeFinderRun interface_run;
    interface_run.name = "interface";
    interface_run.iterations = iterations;
    interface_run.basis_columns = g_basis.cols();
    interface_run.final_ratio = interface_history.empty() ? 0.0 : interface_history.back();
    interface_run.converged = converged;
    interface_run.ratio_history = std::move(interface_history);
    report.range_finders.push_back(std::move(interface_run));
    RangeFinderRun coupling_run;
    coupling_run.name = "coupling";
    coupling_run.iterations = iterations;
    coupling_run.basis_columns = w_basis.cols();
    coupling_run.final_ratio = coupling_history.empty() ? 0.0 : coupling_history.back();
    coupling_run.converged = converged;
    coupling_run.ratio_history = std::move(coupling_history);
    report.range_finders.push_back(std::move(coupling_run));
    report.partition = summarize(part.partition);
    report.phase_seconds = std::move(seconds);
    report.algorithm = "alg3";
    report.seed = config.range_finder.seed;
    return report;
}

EigenReport algorithm4(const SparsePencil& pencil, const SolverConfig& config) {
    SolveLedger ledger;
    std::map<std::string, double> seconds;

    StopWatch partition_clock;
    const PartitionedPencil part = partition_pencil(pencil, config.parts);
    seconds["partition"] = partition_clock.seconds();
    const std::size_t d = part.blocks.d;
    const std::size_t s = part.blocks.s;

    const QuadratureRule rule = trapezoidal_rule(config.disk, config.n_poles);
    StopWatch factor_clock;
    SchurCache cache = build_schur_cache(part, rule, &ledger, config.threads,
                                         config.interface_cap);
    seconds["factor"] = factor_clock.seconds();
    cache.ledger = &ledger;
    cache.phase = "range";

    const LinearOperator op{
        s, s, [&](const std::vector<Complex>& r) {
            return cache.apply_interface_filter(column_matrix(r)).col_vector(0);
        }};
    StopWatch range_clock;
    const RangeFinderResult rf = randomized_range(op, config.range_finder);
    seconds["range"] = range_clock.seconds();

    StopWatch eig_clock;
    DeflatedResolvent resolvent(part, config.disk, config.phi, config.block_dense_cap);
    seconds["block-eig"] = eig_clock.seconds();
    resolvent.ledger = &ledger;
    resolvent.phase = "w-series";

    StopWatch w_clock;
    const DenseMatrix w = build_w(resolvent, rf.basis, config.psi);
    seconds["w-series"] = w_clock.seconds();

    StopWatch extract_clock;
    const DenseMatrix z = block_diagonal_basis(w, rf.basis, d, s);
    EigenReport report = extract(part.reordered, config.disk, z, config.spurious_tol);
    unpermute_vectors(report, part.partition.permutation);
    seconds["extract"] = extract_clock.seconds();

    report.ledger = ledger;
    report.range_finders.push_back(run_stats("interface", rf));
    report.partition = summarize(part.partition);
    report.phase_seconds = std::move(seconds);
    report.algorithm = "alg4";
    report.seed = config.range_finder.seed;
    return report;
}

EigenReport rsi(const SparsePencil& pencil, const SolverConfig& config,
                const DenseMatrix* warm_start) {
    if (config.rsi_subspace == 0) throw Error("rsi: subspace dimension must be at least 1");
    const std::size_t n = pencil.n;
    const std::size_t m = config.rsi_subspace;
    SolveLedger ledger;
    std::map<std::string, double> seconds;

    const QuadratureRule rule = trapezoidal_rule(config.disk, config.n_poles);
    StopWatch factor_clock;
    FullResolventCache cache = build_full_cache(pencil, rule, config.threads);
    seconds["factor"] = factor_clock.seconds();
    cache.ledger = &ledger;
    cache.phase = "rsi";

    Rng rng(config.range_finder.seed);
    auto pad_to_m = [&](DenseMatrix basis) {
        while (basis.cols() < m) {
            DenseMatrix extra(n, m - basis.cols());
            for (auto& z : extra.data()) z = rng.complex_gaussian();
            basis = orthonormalize(hcat(basis, extra));
        }
        return basis;
    };

    DenseMatrix basis;
    if (warm_start != nullptr && warm_start->cols() > 0) {
        DenseMatrix seeded = *warm_start;
        if (seeded.cols() > m) {
            DenseMatrix trimmed(n, m);
            for (std::size_t j = 0; j < m; ++j)
                std::copy(seeded.col(j), seeded.col(j) + n, trimmed.col(j));
            seeded = trimmed;
        }
        basis = pad_to_m(orthonormalize(seeded));
    } else {
        DenseMatrix random(n, m);
        for (auto& z : random.data()) z = rng.complex_gaussian();
        basis = orthonormalize(random);
        basis = pad_to_m(std::move(basis));
    }

    StopWatch sweep_clock;
    EigenReport report;
    std::vector<double> residual_history;
    std::size_t sweeps = 0;
    while (sweeps < config.rsi_max_iterations) {
        ++sweeps;
        DenseMatrix filtered = cache.apply(basis);
        try {
            basis = pad_to_m(orthonormalize(filtered));
        } catch (const AllZeroInput&) {
            // Filter annihilated the whole basis: nothing inside the disk.
            report = EigenReport{};
            break;
        }
        report = extract(pencil, config.disk, basis, config.spurious_tol);
        const double worst =
            report.accepted.empty() ? std::numeric_limits<double>::infinity()
                                    : max_accepted_residual(report);
        residual_history.push_back(worst);
        if (!report.accepted.empty() && worst <= config.rsi_tol) break;
    }
    seconds["sweeps"] = sweep_clock.seconds();

    report.ledger = ledger;
    report.rsi_iterations = sweeps;
    report.rsi_residual_history = std::move(residual_history);
    // Accepted count equal to m means the subspace may have been too small to
    // capture everything inside the disk.
    report.incomplete_capture_warning = report.accepted.size() == m;
    report.phase_seconds = std::move(seconds);
    report.algorithm = "rsi";
    report.seed = config.range_finder.seed;
    return report;
}

Disk disk_around_smallest(const std::vector<Complex>& values, std::size_t count,
                          double inflation) {
    std::vector<Complex> sorted = values;
    std::sort(sorted.begin(), sorted.end(), [](Complex a, Complex b) {
        const double ma = std::abs(a), mb = std::abs(b);
        if (ma != mb) return ma < mb;
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    sorted.resize(std::min(count, sorted.size()));
    Disk disk = minimal_enclosing_disk(sorted);
    disk.radius *= inflation;
    if (disk.radius == 0.0) disk.radius = 1e-8;
    return disk;
}

}  // namespace rfeig
