#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace ragaudit {

struct HttpResponse {
    int status = 0; // 0 = transport failure (connect/timeout), message in body
    std::string body;
};

using HttpHeaders = std::vector<std::pair<std::string, std::string>>;

// Minimal transport seam so provider clients can be exercised against a
// scripted transport in tests.
class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    virtual HttpResponse post_json(const std::string& url, const std::string& body,
                                   const HttpHeaders& headers, int timeout_s) = 0;
};

// Real transport backed by cpp-httplib. Accepts http:// and https:// URLs.
std::unique_ptr<HttpTransport> make_httplib_transport();

// Secrets and provider base URL come from the environment.
inline constexpr const char* kApiKeyEnv = "RAGAUDIT_API_KEY";
inline constexpr const char* kBaseUrlEnv = "RAGAUDIT_BASE_URL";

std::string api_key_from_env();
std::string base_url_from_env();

} // namespace ragaudit
