#include "macrovar/error.hpp"
#include "macrovar/ingest.hpp"

// After the Eigen headers: resolv.h defines a _res macro.
#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <fmt/format.h>

namespace macrovar {

std::string fetch_series_csv(const std::string& series_id, const std::string& base_url,
                             std::chrono::seconds timeout) {
    // Split "scheme://host[:port]/path" into the client origin and the request path.
    const auto scheme_end = base_url.find("://");
    if (scheme_end == std::string::npos)
        throw Error(Errc::config, fmt::format("fetch: base URL '{}' has no scheme", base_url));
    const auto path_start = base_url.find('/', scheme_end + 3);
    const std::string origin = base_url.substr(0, path_start);
    const std::string path = path_start == std::string::npos ? "/" : base_url.substr(path_start);

    httplib::Client client(origin);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_follow_location(true);
    const auto res = client.Get(path, httplib::Params{{"id", series_id}}, httplib::Headers{});
    if (!res)
        throw Error(Errc::fetch, fmt::format("fetch {}: {} ({})", series_id, httplib::to_string(res.error()), base_url));
    if (res->status != 200)
        throw Error(Errc::fetch, fmt::format("fetch {}: HTTP {} from {}", series_id, res->status, base_url));
    return res->body;
}

}  // namespace macrovar
