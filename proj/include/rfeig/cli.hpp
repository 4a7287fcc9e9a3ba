#pragma once

#include <string>
#include <vector>

namespace rfeig {

// Command-line entry point. Returns the process exit code: 0 on success, 2 on
// configuration errors, 3 on numerical failures (which still produce a
// report.json with the error recorded).
int run_cli(const std::vector<std::string>& args);

// Resolves the matrix cache directory: $RFEIG_CACHE or ~/.cache/rfeig.
std::string default_cache_dir();

// Downloads a named test matrix into the cache (Matrix Market gzip over
// HTTPS) and returns the path of the decompressed .mtx file. Throws Error on
// unknown names, missing TLS/zlib support, or network failure.
std::string fetch_matrix(const std::string& name, const std::string& cache_dir,
                         const std::string& url_override = "");

}  // namespace rfeig
