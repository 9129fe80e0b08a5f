#pragma once

#include "taglex/translate.hpp"

#include <chrono>
#include <string>

namespace taglex {

struct HttpBackendConfig {
    /// e.g. "http://127.0.0.1:9000/translate"
    std::string url;
    /// Sent as "Authorization: Bearer <key>" when non-empty.
    std::string api_key;
    std::chrono::milliseconds connect_timeout{5000};
    std::chrono::milliseconds read_timeout{30000};
};

/// JSON-over-HTTP MT adapter:
///   POST {"texts":[...],"from":"fa","to":"ckb"} -> {"translations":[...]}
/// where each translation is a string or null. 429 raises
/// RateLimitExceeded; transport errors, 5xx and malformed replies raise
/// BackendUnavailable.
class HttpBackend : public TranslatorBackend {
public:
    explicit HttpBackend(HttpBackendConfig cfg);

    std::vector<std::optional<std::string>> translate_batch(
        const std::vector<std::string>& items, const LanguagePair& langs) override;

private:
    HttpBackendConfig cfg_;
    std::string origin_;
    std::string path_;
};

}  // namespace taglex
