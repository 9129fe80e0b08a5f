#include "taglex/api.hpp"

#include "taglex/error.hpp"
#include "taglex/lexicon.hpp"
#include "taglex/report.hpp"

#include <httplib.h>
#include <json.hpp>

#include <charconv>

namespace taglex {

using ojson = nlohmann::ordered_json;

namespace {

ApiResponse json_response(int status, const ojson& body) {
    return {status, "application/json", body.dump() + '\n'};
}

ApiResponse error_response(int status, std::string_view kind, std::string_view message) {
    return json_response(status, {{"error", kind}, {"message", message}});
}

ojson entry_json(const Project& p, const LexiconEntry& e, const PronounList& pronouns) {
    const auto* def = p.tagset().lookup(e.tag);
    ojson edits = ojson::array();
    for (const auto& ed : e.edits)
        edits.push_back({{"at", format_rfc3339(ed.at)},
                         {"before", ed.before},
                         {"after", ed.after},
                         {"reason", to_string(ed.reason)}});
    const bool editable = e.state == State::Translated || e.state == State::LabeledCorrect;
    const std::string t = e.translation.value_or("");
    return {{"id", e.id},
            {"source_form", e.source_form},
            {"tag", e.tag},
            {"gloss", def ? def->description : ""},
            {"category", def ? to_string(def->category) : "other"},
            {"translation", e.translation ? ojson(*e.translation) : ojson(nullptr)},
            {"frequency", e.frequency},
            {"state", to_string(e.state)},
            {"ar_flag", e.ar_flag},
            {"source_repeat", e.source_repeat},
            {"seq", e.revision},
            {"strip_leading", editable && strip_leading_pronoun(t, pronouns).has_value()},
            {"strip_trailing", editable && strip_trailing_pronoun(t, pronouns).has_value()},
            {"edits", std::move(edits)}};
}

std::string required_string(const nlohmann::json& body, const char* key) {
    if (!body.contains(key) || !body[key].is_string() || body[key].get<std::string>().empty())
        throw InvalidArgument(std::string("missing field '") + key + "'");
    return body[key].get<std::string>();
}

std::optional<std::uint64_t> optional_seq(const nlohmann::json& body) {
    if (!body.contains("seq") || body["seq"].is_null()) return std::nullopt;
    if (!body["seq"].is_number_unsigned()) throw InvalidArgument("seq must be a non-negative integer");
    return body["seq"].get<std::uint64_t>();
}

std::vector<std::string> split_path(std::string_view path) {
    std::vector<std::string> parts;
    std::size_t i = 0;
    while (i < path.size()) {
        while (i < path.size() && path[i] == '/') ++i;
        const auto j = path.find('/', i);
        const auto end = j == std::string_view::npos ? path.size() : j;
        if (end > i) parts.emplace_back(path.substr(i, end - i));
        i = end;
    }
    return parts;
}

}  // namespace

ApiHandler::ApiHandler(ProjectStore& store, ApiOptions options)
    : store_(store), options_(std::move(options)) {}

ApiResponse ApiHandler::handle(const ApiRequest& req) const {
    if (!options_.token.empty() && req.authorization != "Bearer " + options_.token)
        return error_response(401, "Unauthorized", "missing or wrong bearer token");
    try {
        return dispatch(req);
    } catch (const UnknownEntry& e) {
        return error_response(404, "UnknownEntry", e.what());
    } catch (const IllegalTransition& e) {
        return error_response(409, "IllegalTransition", e.what());
    } catch (const Conflict& e) {
        return error_response(409, "Conflict", e.what());
    } catch (const NotArTagged& e) {
        return error_response(409, "NotArTagged", e.what());
    } catch (const NothingToStrip& e) {
        return error_response(409, "NothingToStrip", e.what());
    } catch (const EmptyLexicon& e) {
        return error_response(409, "EmptyLexicon", e.what());
    } catch (const StageError& e) {
        return error_response(409, "StageError", e.what());
    } catch (const InvalidArgument& e) {
        return error_response(400, "BadRequest", e.what());
    } catch (const nlohmann::json::exception& e) {
        return error_response(400, "BadRequest", e.what());
    } catch (const Error& e) {
        return error_response(500, "InternalError", e.what());
    }
}

ApiResponse ApiHandler::dispatch(const ApiRequest& req) const {
    const auto parts = split_path(req.path);
    if (parts.empty() || parts[0] != "api") return error_response(404, "NotFound", req.path);

    if (req.method == "GET") {
        if (parts.size() == 2 && parts[1] == "queue") return queue(req);
        if (parts.size() == 2 && parts[1] == "stats") return stats();
        if (parts.size() == 3 && parts[1] == "entries") return entry(parts[2]);
        if (parts.size() == 3 && parts[1] == "export") return export_list(parts[2]);
    } else if (req.method == "POST") {
        if (parts.size() == 4 && parts[1] == "entries") return mutate(parts[2], parts[3], req.body);
    }
    return error_response(404, "NotFound", req.method + " " + req.path);
}

ApiResponse ApiHandler::queue(const ApiRequest& req) const {
    auto stage_it = req.query.find("stage");
    const auto stage = parse_queue_stage(stage_it == req.query.end() ? "triage" : stage_it->second);
    if (!stage) throw InvalidArgument("stage must be triage or review");

    std::size_t limit = 20;
    if (auto it = req.query.find("limit"); it != req.query.end()) {
        const auto& s = it->second;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), limit);
        if (ec != std::errc() || p != s.data() + s.size() || limit == 0)
            throw InvalidArgument("limit must be a positive integer");
        limit = std::min<std::size_t>(limit, 1000);
    }

    return store_.read([&](const Project& p) {
        ReviewQueue q(p, *stage);
        ojson entries = ojson::array();
        for (const auto& id : q.next(limit)) entries.push_back(entry_json(p, p.at(id), options_.pronouns));
        return json_response(200, {{"stage", to_string(*stage)},
                                   {"total", q.size()},
                                   {"seq", p.last_seq()},
                                   {"entries", std::move(entries)}});
    });
}

ApiResponse ApiHandler::entry(const std::string& id) const {
    return store_.read(
        [&](const Project& p) { return json_response(200, entry_json(p, p.at(id), options_.pronouns)); });
}

ApiResponse ApiHandler::mutate(const std::string& id, const std::string& action,
                               const std::string& raw_body) const {
    const auto body = raw_body.empty() ? nlohmann::json::object() : nlohmann::json::parse(raw_body);
    if (!body.is_object()) throw InvalidArgument("body must be a JSON object");
    const std::string actor = required_string(body, "actor");
    const auto seq = optional_seq(body);

    std::function<void(Project&)> op;
    if (action == "label") {
        const auto lbl = parse_label(required_string(body, "label"));
        if (!lbl) throw InvalidArgument("label must be correct, not-correct or undecided");
        op = [&, lbl = *lbl](Project& p) { label(p, id, lbl, actor, seq); };
    } else if (action == "unlabel") {
        op = [&](Project& p) { unlabel(p, id, actor, seq); };
    } else if (action == "verdict") {
        const auto v = parse_verdict(required_string(body, "verdict"));
        if (!v || *v == Verdict::Repeated) throw InvalidArgument("verdict must be accurate or concerned");
        op = [&, v = *v](Project& p) { review_accuracy(p, id, v, actor, seq); };
    } else if (action == "edit") {
        const std::string kind = required_string(body, "kind");
        TrivialEdit edit;
        if (kind == "strip-leading") {
            edit = TrivialEdit::strip_leading();
        } else if (kind == "strip-trailing") {
            edit = TrivialEdit::strip_trailing();
        } else if (kind == "manual") {
            edit = TrivialEdit::manual(body.value("before", std::string()), required_string(body, "after"));
        } else {
            throw InvalidArgument("kind must be strip-leading, strip-trailing or manual");
        }
        const bool before_given = body.contains("before");
        op = [&, edit](Project& p) mutable {
            if (edit.kind == EditReason::Manual && !before_given)
                edit.before = p.at(id).translation.value_or("");
            trivial_edit(p, id, edit, actor, options_.pronouns, seq);
        };
    } else if (action == "flag-ar") {
        op = [&](Project& p) { flag_ar(p, id, actor); };
    } else {
        return error_response(404, "NotFound", "unknown action " + action);
    }

    return store_.mutate([&](Project& p) {
        op(p);
        const auto& e = p.at(id);
        ojson reply = entry_json(p, e, options_.pronouns);
        reply["project_seq"] = p.last_seq();
        return json_response(200, reply);
    });
}

ApiResponse ApiHandler::stats() const {
    const std::string corpus = store_.meta().corpus;
    return store_.read([&](const Project& p) {
        ojson states = ojson::object();
        for (State s : kAllStates) states[std::string(to_string(s))] = p.count(s);
        ojson dist = nullptr;
        if (p.count(State::ReviewedAccurate) > 0) dist = distribution_to_json(distribution(p, options_.scheme));
        return json_response(200, {{"seq", p.last_seq()},
                                   {"entries", p.size()},
                                   {"states", std::move(states)},
                                   {"ar_flagged", p.ar_count()},
                                   {"source_repeats", p.source_repeat_count()},
                                   {"summary", summary_to_json(pipeline_summary(p, corpus))},
                                   {"distribution", std::move(dist)}});
    });
}

ApiResponse ApiHandler::export_list(const std::string& list) const {
    if (list == "lexicon") {
        return store_.read([&](const Project& p) {
            return ApiResponse{200, "text/tab-separated-values; charset=utf-8",
                               export_lexicon(p, LexiconFormat::Tsv, format_rfc3339(p.now()))};
        });
    }
    const auto name = parse_list_name(list);
    if (!name) return error_response(404, "NotFound", "unknown list " + list);
    return store_.read([&](const Project& p) {
        return ApiResponse{200, "text/csv; charset=utf-8", taglex::export_list(p, *name)};
    });
}

struct ApiServer::Impl {
    ApiHandler handler;
    httplib::Server server;

    Impl(ProjectStore& store, ApiOptions options) : handler(store, options) {
        auto adapt = [this](const httplib::Request& req, httplib::Response& res) {
            ApiRequest r;
            r.method = req.method;
            r.path = req.path;
            for (const auto& [k, v] : req.params) r.query.emplace(k, v);
            r.body = req.body;
            r.authorization = req.get_header_value("Authorization");
            const ApiResponse out = handler.handle(r);
            res.status = out.status;
            res.set_content(out.body, out.content_type);
        };
        server.Get(R"(/api/.*)", adapt);
        server.Post(R"(/api/.*)", adapt);
        if (!options.static_dir.empty()) server.set_mount_point("/", options.static_dir);
    }
};

ApiServer::ApiServer(ProjectStore& store, ApiOptions options)
    : impl_(std::make_unique<Impl>(store, std::move(options))) {}

ApiServer::~ApiServer() { stop(); }

int ApiServer::bind(const std::string& host, int port) {
    if (port == 0) return impl_->server.bind_to_any_port(host);
    return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool ApiServer::listen() { return impl_->server.listen_after_bind(); }

void ApiServer::stop() {
    if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace taglex
