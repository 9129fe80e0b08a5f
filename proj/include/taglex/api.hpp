#pragma once

#include "taglex/review.hpp"
#include "taglex/stats.hpp"
#include "taglex/store.hpp"

#include <map>
#include <memory>
#include <string>

namespace taglex {

struct ApiRequest {
    std::string method;  // "GET" | "POST"
    std::string path;    // without query string
    std::map<std::string, std::string> query;
    std::string body;
    std::string authorization;  // raw Authorization header
};

struct ApiResponse {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
};

struct ApiOptions {
    /// Optional bearer token; when set every /api request must present it.
    std::string token;
    PronounList pronouns;
    PercentileScheme scheme = PercentileScheme::MinRankOverN;
    /// Directory of static UI assets served at "/", if any.
    std::string static_dir;
};

/// Review workflow over JSON:
///   GET  /api/queue?stage=triage|review&limit=N
///   GET  /api/entries/{id}
///   POST /api/entries/{id}/label    {label, actor, seq?}
///   POST /api/entries/{id}/unlabel  {actor, seq?}
///   POST /api/entries/{id}/verdict  {verdict, actor, seq?}
///   POST /api/entries/{id}/edit     {kind, before?, after?, actor, seq?}
///   POST /api/entries/{id}/flag-ar  {actor}
///   GET  /api/stats
///   GET  /api/export/{list}         (six review lists, or "lexicon")
/// `seq` is the entry revision the client last saw; a stale value gets 409.
/// Mutations go through ProjectStore::mutate, the single commit point.
class ApiHandler {
public:
    ApiHandler(ProjectStore& store, ApiOptions options);

    ApiResponse handle(const ApiRequest& req) const;

private:
    ApiResponse dispatch(const ApiRequest& req) const;
    ApiResponse queue(const ApiRequest& req) const;
    ApiResponse entry(const std::string& id) const;
    ApiResponse mutate(const std::string& id, const std::string& action, const std::string& body) const;
    ApiResponse stats() const;
    ApiResponse export_list(const std::string& list) const;

    ProjectStore& store_;
    ApiOptions options_;
};

/// HTTP transport for ApiHandler.
class ApiServer {
public:
    ApiServer(ProjectStore& store, ApiOptions options);
    ~ApiServer();

    /// Binds `host:port` (port 0 picks a free port). Returns the bound port or -1.
    int bind(const std::string& host, int port);
    /// Serves until stop(). Call after bind().
    bool listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace taglex
