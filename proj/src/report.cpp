#include "rfeig/report.hpp"

#include <cstdio>
#include <fstream>

#include "rfeig/errors.hpp"

namespace rfeig {

OrderedJson report_to_json(const EigenReport& report, const OrderedJson& config_echo,
                           const std::string& error) {
    OrderedJson out;
    out["schema"] = 1;
    out["algorithm"] = report.algorithm;
    out["config"] = config_echo;
    out["seed"] = report.seed;

    OrderedJson values = OrderedJson::array();
    for (const RitzPair& pair : report.accepted) {
        OrderedJson entry;
        entry["re"] = pair.value.real();
        entry["im"] = pair.value.imag();
        entry["residual"] = pair.residual;
        values.push_back(std::move(entry));
    }
    out["eigenvalues"] = std::move(values);
    out["accepted_count"] = report.accepted.size();
    out["spurious_count"] = report.spurious_count;
    out["ritz_count"] = report.ritz_count;

    OrderedJson phases = OrderedJson::array();
    for (const auto& [name, counts] : report.ledger.phases()) {
        OrderedJson phase;
        phase["phase"] = name;
        phase["b_solves"] = counts.b_solves;
        phase["s_solves"] = counts.s_solves;
        phase["full_solves"] = counts.full_solves;
        phases.push_back(std::move(phase));
    }
    out["ledger"] = std::move(phases);

    OrderedJson finders = OrderedJson::array();
    for (const RangeFinderRun& run : report.range_finders) {
        OrderedJson entry;
        entry["name"] = run.name;
        entry["iterations"] = run.iterations;
        entry["basis_columns"] = run.basis_columns;
        entry["final_ratio"] = run.final_ratio;
        entry["converged"] = run.converged;
        finders.push_back(std::move(entry));
    }
    out["range_finders"] = std::move(finders);

    if (report.algorithm == "rsi") {
        out["rsi_iterations"] = report.rsi_iterations;
        out["rsi_residual_history"] = report.rsi_residual_history;
        out["incomplete_capture_warning"] = report.incomplete_capture_warning;
    }

    if (report.partition.parts > 0) {
        OrderedJson partition;
        partition["parts"] = report.partition.parts;
        partition["interior_sizes"] = report.partition.interior_sizes;
        partition["interface_sizes"] = report.partition.interface_sizes;
        partition["interior_total"] = report.partition.interior_total;
        partition["interface_total"] = report.partition.interface_total;
        partition["edge_cut"] = report.partition.edge_cut;
        out["partition"] = std::move(partition);
    }

    OrderedJson timings;
    for (const auto& [name, secs] : report.phase_seconds) timings[name] = secs;
    out["phase_seconds"] = std::move(timings);

    if (!error.empty()) out["error"] = error;
    return out;
}

std::string eigenvalues_csv(const EigenReport& report) {
    std::string csv = "re(theta),im(theta),residual\n";
    char line[128];
    for (const RitzPair& pair : report.accepted) {
        std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n", pair.value.real(),
                      pair.value.imag(), pair.residual);
        csv += line;
    }
    return csv;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << content;
}

}  // namespace rfeig
