#pragma once

#include <string>

#include "json.hpp"
#include "rfeig/hrr.hpp"

namespace rfeig {

using OrderedJson = nlohmann::ordered_json;

// Machine-readable run report, schema version 1. Field order is fixed so
// reports diff cleanly.
OrderedJson report_to_json(const EigenReport& report, const OrderedJson& config_echo,
                           const std::string& error = "");

// Accepted pairs as CSV lines `re(theta),im(theta),residual` with 17
// significant digits; byte-identical for identical reports.
std::string eigenvalues_csv(const EigenReport& report);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace rfeig
