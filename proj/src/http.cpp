#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "ragaudit/http.hpp"

#include <cstdlib>

namespace ragaudit {

namespace {

// Splits "https://host:port/path" into scheme://host:port and /path.
std::pair<std::string, std::string> split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    const std::size_t host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    const auto path_start = url.find('/', host_start);
    if (path_start == std::string::npos) {
        return {url, "/"};
    }
    return {url.substr(0, path_start), url.substr(path_start)};
}

class HttplibTransport final : public HttpTransport {
public:
    HttpResponse post_json(const std::string& url, const std::string& body,
                           const HttpHeaders& headers, int timeout_s) override {
        const auto [origin, path] = split_url(url);
        httplib::Client client(origin);
        client.set_connection_timeout(timeout_s);
        client.set_read_timeout(timeout_s);
        client.set_write_timeout(timeout_s);

        httplib::Headers hdrs;
        for (const auto& [name, value] : headers) {
            hdrs.emplace(name, value);
        }
        auto result = client.Post(path, hdrs, body, "application/json");
        if (!result) {
            return {0, "transport error: " + httplib::to_string(result.error())};
        }
        return {result->status, result->body};
    }
};

} // namespace

std::unique_ptr<HttpTransport> make_httplib_transport() {
    return std::make_unique<HttplibTransport>();
}

std::string api_key_from_env() {
    const char* value = std::getenv(kApiKeyEnv);
    return value ? value : "";
}

std::string base_url_from_env() {
    const char* value = std::getenv(kBaseUrlEnv);
    return value ? value : "";
}

} // namespace ragaudit
