#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>

#include "rfeig/cli.hpp"
#include "rfeig/errors.hpp"

#ifdef RFEIG_HAVE_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#ifdef RFEIG_HAVE_HTTPLIB
#include "httplib.h"
#endif
#ifdef RFEIG_HAVE_ZLIB
#include <zlib.h>
#endif

namespace rfeig {

namespace {

// Matrix Market mirror paths for the pencils used in the experiments.
const std::map<std::string, std::string> kMatrixUrls = {
    {"utm1700a", "https://math.nist.gov/pub/MatrixMarket2/SPARSKIT/tokamak/utm1700a.mtx.gz"},
    {"utm1700b", "https://math.nist.gov/pub/MatrixMarket2/SPARSKIT/tokamak/utm1700b.mtx.gz"},
    {"wang1", "https://math.nist.gov/pub/MatrixMarket2/NEP/mvmwang/wang1.mtx.gz"},
    {"bfw782a", "https://math.nist.gov/pub/MatrixMarket2/NEP/bfwave/bfw782a.mtx.gz"},
    {"bfw782b", "https://math.nist.gov/pub/MatrixMarket2/NEP/bfwave/bfw782b.mtx.gz"},
    {"rdb3200l", "https://math.nist.gov/pub/MatrixMarket2/NEP/matpde/rdb3200l.mtx.gz"},
    {"dw4096", "https://math.nist.gov/pub/MatrixMarket2/NEP/dwave/dw4096.mtx.gz"},
};

#ifdef RFEIG_HAVE_ZLIB
std::string gunzip(const std::string& compressed) {
    z_stream stream{};
    if (inflateInit2(&stream, 15 + 16) != Z_OK) throw Error("zlib initialization failed");
    std::string out;
    out.reserve(compressed.size() * 4);
    char buffer[1 << 16];
    stream.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(compressed.data()));
    stream.avail_in = static_cast<uInt>(compressed.size());
    int status = Z_OK;
    while (status != Z_STREAM_END) {
        stream.next_out = reinterpret_cast<Bytef*>(buffer);
        stream.avail_out = sizeof(buffer);
        status = inflate(&stream, Z_NO_FLUSH);
        if (status != Z_OK && status != Z_STREAM_END) {
            inflateEnd(&stream);
            throw Error("gzip decompression failed");
        }
        out.append(buffer, sizeof(buffer) - stream.avail_out);
    }
    inflateEnd(&stream);
    return out;
}
#endif

}  // namespace

std::string default_cache_dir() {
    if (const char* env = std::getenv("RFEIG_CACHE"); env != nullptr && *env != '\0')
        return env;
    if (const char* home = std::getenv("HOME"); home != nullptr && *home != '\0')
        return std::string(home) + "/.cache/rfeig";
    return ".rfeig-cache";
}

std::string fetch_matrix(const std::string& name, const std::string& cache_dir,
                         const std::string& url_override) {
    namespace fs = std::filesystem;
    const fs::path target = fs::path(cache_dir) / (name + ".mtx");
    if (fs::exists(target)) return target.string();

    std::string url = url_override;
    if (url.empty()) {
        auto it = kMatrixUrls.find(name);
        if (it == kMatrixUrls.end())
            throw Error("no known source for matrix '" + name + "'; pass --url");
        url = it->second;
    }

#if !defined(RFEIG_HAVE_HTTPLIB)
    throw Error("fetch support not built in");
#else
#if !defined(RFEIG_HAVE_OPENSSL)
    if (url.rfind("https://", 0) == 0)
        throw Error("built without TLS support; cannot fetch " + url);
#endif
#if !defined(RFEIG_HAVE_ZLIB)
    if (url.size() > 3 && url.substr(url.size() - 3) == ".gz")
        throw Error("built without zlib; cannot decompress " + url);
#endif
    const std::size_t scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw Error("malformed URL: " + url);
    const std::size_t host_start = scheme_end + 3;
    const std::size_t path_start = url.find('/', host_start);
    const std::string origin = url.substr(0, path_start);
    const std::string path = url.substr(path_start);

    httplib::Client client(origin);
    client.set_follow_location(true);
    client.set_connection_timeout(20, 0);
    client.set_read_timeout(60, 0);
    auto res = client.Get(path);
    if (!res || res->status != 200)
        throw Error("download failed for " + url +
                    (res ? " (status " + std::to_string(res->status) + ")" : " (no response)"));

    std::string body = res->body;
#ifdef RFEIG_HAVE_ZLIB
    if (url.size() > 3 && url.substr(url.size() - 3) == ".gz") body = gunzip(body);
#endif
    fs::create_directories(cache_dir);
    std::ofstream out(target, std::ios::binary);
    if (!out) throw Error("cannot write " + target.string());
    out << body;
    return target.string();
#endif
}

}  // namespace rfeig
