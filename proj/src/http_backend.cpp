#include "taglex/http_backend.hpp"

#include "taglex/error.hpp"

#include <httplib.h>
#include <json.hpp>

namespace taglex {

HttpBackend::HttpBackend(HttpBackendConfig cfg) : cfg_(std::move(cfg)) {
    const auto scheme_end = cfg_.url.find("://");
    if (scheme_end == std::string::npos) throw InvalidArgument("backend url needs a scheme: " + cfg_.url);
    const auto path_start = cfg_.url.find('/', scheme_end + 3);
    origin_ = cfg_.url.substr(0, path_start);
    path_ = path_start == std::string::npos ? "/" : cfg_.url.substr(path_start);
}

std::vector<std::optional<std::string>> HttpBackend::translate_batch(
    const std::vector<std::string>& items, const LanguagePair& langs) {
    httplib::Client client(origin_);
    client.set_connection_timeout(cfg_.connect_timeout);
    client.set_read_timeout(cfg_.read_timeout);
    client.set_write_timeout(cfg_.read_timeout);

    httplib::Headers headers;
    if (!cfg_.api_key.empty()) headers.emplace("Authorization", "Bearer " + cfg_.api_key);

    const nlohmann::json body = {{"texts", items}, {"from", langs.src}, {"to", langs.dst}};
    auto res = client.Post(path_, headers, body.dump(), "application/json");
    if (!res) throw BackendUnavailable("translation request failed: " + httplib::to_string(res.error()));
    if (res->status == 429) throw RateLimitExceeded("translation service returned 429");
    if (res->status != 200)
        throw BackendUnavailable("translation service returned HTTP " + std::to_string(res->status));

    nlohmann::json reply;
    try {
        reply = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
        throw BackendUnavailable(std::string("unparseable translation reply: ") + e.what());
    }
    if (!reply.contains("translations") || !reply["translations"].is_array())
        throw BackendUnavailable("translation reply lacks a translations array");
    const auto& arr = reply["translations"];
    if (arr.size() != items.size()) throw BackendUnavailable("translation reply is misaligned");

    std::vector<std::optional<std::string>> out;
    out.reserve(arr.size());
    for (const auto& t : arr) {
        if (t.is_string())
            out.emplace_back(t.get<std::string>());
        else
            out.emplace_back(std::nullopt);
    }
    return out;
}

}  // namespace taglex
