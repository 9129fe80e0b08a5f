#include "taglex/cli.hpp"

#include "taglex/api.hpp"
#include "taglex/csv.hpp"
#include "taglex/error.hpp"
#include "taglex/http_backend.hpp"
#include "taglex/ingest.hpp"
#include "taglex/lexicon.hpp"
#include "taglex/report.hpp"
#include "taglex/review.hpp"
#include "taglex/stats.hpp"
#include "taglex/store.hpp"
#include "taglex/translate.hpp"
#include "taglex/unicode.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace taglex {

namespace {

/// Bad flag values detected after parsing; exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

const std::vector<std::string> kTriageHeader = {"id",          "source_form", "tag", "frequency",
                                                "translation", "label"};

struct Options {
    std::string project;
    std::string actor = "cli";

    // ingest
    std::string corpus;
    std::string delimiter = "auto";
    std::string comment;
    std::string tagset;
    std::string name;

    // translate
    std::string backend = "stub";
    std::string dictionary;
    std::string fallback_dictionary;
    std::string miss_policy = "echo";
    std::string endpoint;
    std::size_t batch_size = 50;
    std::size_t max_in_flight = 1;
    std::size_t retries = 3;
    double rate = 10.0;
    std::string from = "fa";
    std::string to = "ckb";

    // triage / review / exports
    std::string in;
    std::string out;
    std::string id;
    std::string verdict;
    std::string strip;
    std::string after;
    std::optional<std::uint64_t> seq;
    std::vector<std::string> pronouns;
    std::string scheme = "rank/n";
    std::string format = "tsv";

    // serve
    std::string bind = "127.0.0.1";
    int port = 8080;
    std::string static_dir;
};

std::string now_string(const Project& p) { return format_rfc3339(p.now()); }

PronounList pronoun_list(const Options& o) {
    PronounList list;
    if (!o.pronouns.empty()) list.tokens = o.pronouns;
    return list;
}

PercentileScheme scheme_of(const Options& o) {
    const auto s = parse_percentile_scheme(o.scheme);
    if (!s) throw UsageError("--percentile-scheme: expected rank/n or rank/(n+1), got '" + o.scheme + "'");
    return *s;
}

std::unique_ptr<ProjectStore> open_store(const Options& o) {
    return ProjectStore::open(o.project);
}

void write_text(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    write_file_atomic(path, content);
}

void write_lists(ProjectStore& store) {
    store.read([&](const Project& p) {
        for (ListName l : kAllLists)
            write_text(store.exports_dir() / (std::string(to_string(l)) + ".csv"), export_list(p, l));
        return 0;
    });
}

std::map<std::string, std::string> load_dictionary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read dictionary " + path);
    return read_tsv_map(in);
}

// ---- ingest ---------------------------------------------------------------

int cmd_ingest(const Options& o, std::ostream& out) {
    CorpusFormat format;
    try {
        format = parse_delimiter(o.delimiter);
        if (!o.comment.empty()) format.comment_prefix = o.comment;
        format.validate();
    } catch (const InvalidArgument& e) {
        throw UsageError(std::string("--delimiter: ") + e.what());
    }

    TagSet tagset = default_tagset();
    if (!o.tagset.empty()) tagset = TagSet::from_json(nlohmann::json::parse(read_file(o.tagset)));

    std::ifstream in(o.corpus, std::ios::binary);
    if (!in) throw IoError("cannot read corpus " + o.corpus);

    std::unique_ptr<ProjectStore> store;
    if (ProjectStore::exists(o.project)) {
        store = ProjectStore::open(o.project);
        const bool same = store->read([&](const Project& p) { return p.tagset() == tagset; });
        if (!same) throw StageError("ingest: project was created with a different tagset");
    }

    const ParseResult parsed = parse_corpus(in, format, tagset);
    const auto entries = dedup(parsed.tokens);

    ProjectMeta meta;
    meta.name = o.name.empty() ? fs::path(o.project).filename().string() : o.name;
    meta.corpus = fs::path(o.corpus).filename().string();
    meta.accepted_tokens = parsed.tokens.size();
    meta.quarantined = parsed.quarantine.size();
    if (!store) {
        store = ProjectStore::create(o.project, meta, tagset);
    } else {
        store->set_meta(meta);
    }

    const std::size_t added =
        store->mutate([&](Project& p) { return add_entries(p, entries, o.actor); });

    std::ostringstream deduped, quarantine;
    write_entries_csv(deduped, entries);
    write_quarantine_csv(quarantine, parsed.quarantine);
    write_text(store->exports_dir() / "entries.csv", deduped.str());
    write_text(store->exports_dir() / "quarantine.csv", quarantine.str());
    store->write_snapshot();

    out << fmt::format("ingest: {} tokens accepted, {} quarantined, {} distinct entries ({} new)\n",
                       parsed.tokens.size(), parsed.quarantine.size(), entries.size(), added);
    return kExitOk;
}

// ---- translate ------------------------------------------------------------

std::shared_ptr<TranslatorBackend> make_backend(const Options& o) {
    std::shared_ptr<TranslatorBackend> primary;
    if (o.backend == "stub") {
        const MissPolicy policy = o.miss_policy == "fail" ? MissPolicy::Fail : MissPolicy::Echo;
        if (o.miss_policy != "echo" && o.miss_policy != "fail")
            throw UsageError("--miss-policy: expected echo or fail, got '" + o.miss_policy + "'");
        std::map<std::string, std::string> dict;
        if (!o.dictionary.empty()) dict = load_dictionary(o.dictionary);
        primary = stub_backend(std::move(dict), policy);
    } else if (o.backend == "http") {
        if (o.endpoint.empty()) throw UsageError("--endpoint is required with --backend http");
        HttpBackendConfig cfg;
        cfg.url = o.endpoint;
        if (const char* key = std::getenv("TAGLEX_API_KEY")) cfg.api_key = key;
        primary = std::make_shared<HttpBackend>(cfg);
    } else {
        throw UsageError("--backend: expected stub or http, got '" + o.backend + "'");
    }
    if (o.fallback_dictionary.empty()) return primary;
    auto fallback = stub_backend(load_dictionary(o.fallback_dictionary), MissPolicy::Fail);
    return std::make_shared<FallbackBackend>(
        std::vector<std::shared_ptr<TranslatorBackend>>{primary, fallback});
}

int cmd_translate(const Options& o, std::ostream& out, std::ostream& err) {
    if (!ProjectStore::exists(o.project)) throw StageError("translate: no deduped entries (run ingest first)");

    TranslateConfig cfg;
    cfg.batch_size = o.batch_size;
    cfg.max_in_flight = o.max_in_flight;
    cfg.retries = o.retries;
    cfg.rate_per_sec = o.rate;
    cfg.langs = {o.from, o.to};
    try {
        cfg.validate();
    } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
    }
    auto backend = make_backend(o);

    auto store = open_store(o);
    const auto pending = store->read([](const Project& p) {
        std::vector<LexiconEntry> v;
        for (const auto& e : p.entries())
            if (e.state == State::Deduped) v.push_back(e);
        return v;
    });
    const std::size_t translated_before = store->read([](const Project& p) {
        return p.size() - p.count(State::Raw) - p.count(State::Deduped);
    });
    if (pending.empty() && translated_before == 0) throw StageError("translate: no deduped entries");

    TranslationCache cache(cfg.langs);
    const fs::path cache_path = store->dir() / cache.file_name();
    if (fs::exists(cache_path)) {
        std::ifstream cin(cache_path, std::ios::binary);
        cache.load(cin);
    }
    auto save_cache = [&] {
        std::ostringstream ss;
        cache.save(ss);
        write_file_atomic(cache_path, ss.str());
    };

    // Commits Translate events for every still-Deduped entry whose source
    // now has a translation.
    auto commit_translations = [&](const std::map<std::string, std::string>& done) {
        store->mutate([&](Project& p) {
            for (const auto& e : pending) {
                const auto* cur = p.find(e.id);
                if (!cur || cur->state != State::Deduped) continue;
                auto it = done.find(unicode::normalize(e.source_form));
                if (it != done.end()) p.commit(e.id, TranslatePayload{it->second}, o.actor);
            }
        });
    };

    TranslateOutcome outcome;
    if (!pending.empty()) {
        outcome = translate_entries(pending, *backend, cache, cfg, [&](const auto& batch) {
            commit_translations(batch);
            save_cache();
        });
        std::map<std::string, std::string> rest;
        for (const auto& e : outcome.entries)
            if (e.state == State::Translated && e.translation)
                rest.emplace(unicode::normalize(e.source_form), *e.translation);
        commit_translations(rest);
        save_cache();
    }

    const std::string csv = store->read([](const Project& p) {
        std::vector<LexiconEntry> v;
        for (const auto& e : p.entries())
            if (e.translation) v.push_back(e);
        for (auto& e : v) e.state = State::Translated;
        return export_translated_csv(v);
    });
    write_text(store->exports_dir() / "Translated.csv", csv);
    store->write_snapshot();

    out << fmt::format("translate: {} pending, {} batches sent, {} cache hits, {} failed\n",
                       pending.size(), outcome.batches, outcome.cache_hits, outcome.failures.size());
    for (const auto& f : outcome.failures)
        err << fmt::format("  failed {} ({}): {}\n", f.source_form, f.entry_id, f.reason);
    if (!outcome.failures.empty()) {
        err << "translate: some entries are still deduped; rerun to retry them\n";
        return kExitDomain;
    }
    return kExitOk;
}

// ---- triage ---------------------------------------------------------------

int cmd_triage_export(const Options& o, std::ostream& out) {
    auto store = open_store(o);
    std::size_t rows = 0;
    const std::string csv = store->read([&](const Project& p) {
        if (p.count(Stage::Translated) + p.count(Stage::Labeled) + p.count(Stage::Reviewed) == 0)
            throw StageError("triage-export: no translated entries (run translate first)");
        std::string s = csv::format_row(kTriageHeader);
        for (const auto& e : p.entries()) {
            if (e.state != State::Translated) continue;
            s += csv::format_row({e.id, e.source_form, e.tag, std::to_string(e.frequency),
                                  *e.translation, ""});
            ++rows;
        }
        return s;
    });
    const fs::path path = o.out.empty() ? store->exports_dir() / "triage.csv" : fs::path(o.out);
    write_text(path, csv);
    out << fmt::format("triage-export: {} entries awaiting a label written to {}\n", rows, path.string());
    return kExitOk;
}

struct TriageRow {
    std::size_t line = 0;
    std::string id;
    std::string translation;
    Label label = Label::Undecided;
};

/// Applies the rows to `p`. Rows already carrying the same label are
/// skipped so an interrupted import can be rerun. Returns labels applied.
std::size_t apply_triage(Project& p, const std::vector<TriageRow>& rows, const std::string& actor) {
    std::size_t applied = 0;
    for (const auto& r : rows) {
        try {
            const auto& e = p.at(r.id);
            if (label_of(e.state) == r.label) continue;
            const std::string wanted = unicode::normalize(r.translation);
            if (e.state == State::Translated && !wanted.empty() && wanted != e.translation.value_or(""))
                trivial_edit(p, r.id, TrivialEdit::manual(*e.translation, wanted), actor);
            label(p, r.id, r.label, actor);
            if (e.tag == kArTag) flag_ar(p, r.id, actor);
            ++applied;
        } catch (const Error& ex) {
            throw StageError(fmt::format("triage-import: line {}: {}", r.line, ex.what()));
        }
    }
    return applied;
}

int cmd_triage_import(const Options& o, std::ostream& out) {
    auto store = open_store(o);
    std::ifstream in(o.in, std::ios::binary);
    if (!in) throw IoError("cannot read " + o.in);

    std::vector<TriageRow> rows;
    csv::Reader reader(in);
    csv::expect_header(reader, kTriageHeader);
    while (auto row = reader.next()) {
        if (row->size() != kTriageHeader.size())
            throw MalformedCsv(reader.line(), fmt::format("expected {} fields, got {}",
                                                          kTriageHeader.size(), row->size()));
        const std::string& cell = (*row)[5];
        if (cell.empty()) continue;
        const auto lbl = parse_label(cell);
        if (!lbl)
            throw MalformedCsv(reader.line(), "label must be correct, not-correct or undecided, got '" +
                                                  cell + "'");
        rows.push_back({reader.line(), (*row)[0], (*row)[4], *lbl});
    }

    const std::size_t applied = store->mutate([&](Project& p) {
        Project trial = p;
        apply_triage(trial, rows, o.actor);
        return apply_triage(p, rows, o.actor);
    });
    write_lists(*store);
    store->write_snapshot();
    out << fmt::format("triage-import: {} labeled rows, {} applied\n", rows.size(), applied);
    return kExitOk;
}

// ---- review ---------------------------------------------------------------

int cmd_review(const Options& o, std::ostream& out) {
    auto store = open_store(o);
    const PronounList pronouns = pronoun_list(o);

    std::optional<Verdict> verdict;
    if (!o.verdict.empty()) {
        verdict = parse_verdict(o.verdict);
        if (!verdict || *verdict == Verdict::Repeated)
            throw UsageError("--verdict: expected accurate or concerned, got '" + o.verdict + "'");
    }
    std::optional<TrivialEdit> edit;
    if (!o.strip.empty()) {
        if (o.strip == "leading") {
            edit = TrivialEdit::strip_leading();
        } else if (o.strip == "trailing") {
            edit = TrivialEdit::strip_trailing();
        } else {
            throw UsageError("--strip: expected leading or trailing, got '" + o.strip + "'");
        }
    } else if (!o.after.empty()) {
        edit = TrivialEdit::manual({}, o.after);
    }

    if (o.id.empty()) {
        ReviewQueue q = store->read([](const Project& p) { return ReviewQueue(p, QueueStage::Review); });
        out << fmt::format("review: {} entries awaiting a verdict\n", q.size());
        store->read([&](const Project& p) {
            for (const auto& id : q.next(20)) {
                const auto& e = p.at(id);
                out << fmt::format("{}\t{}\t{}\t{}\n", e.id, e.tag, e.source_form, *e.translation);
            }
            return 0;
        });
        return kExitOk;
    }
    if (!verdict && !edit) throw UsageError("review: give --verdict, --strip or --after with --id");

    store->mutate([&](Project& p) {
        auto seq = o.seq;
        if (edit) {
            if (edit->kind == EditReason::Manual) edit->before = p.at(o.id).translation.value_or("");
            trivial_edit(p, o.id, *edit, o.actor, pronouns, seq);
            if (seq) seq = p.last_seq();
        }
        if (verdict) review_accuracy(p, o.id, *verdict, o.actor, seq);
    });
    store->write_snapshot();
    const auto& e = store->read([&](const Project& p) { return p.at(o.id); });
    out << fmt::format("{}\t{}\t{}\n", e.id, to_string(e.state), e.translation.value_or(""));
    return kExitOk;
}

int cmd_collapse(const Options& o, std::ostream& out) {
    auto store = open_store(o);
    const std::size_t n = store->mutate([&](Project& p) {
        if (p.count(State::LabeledCorrect) + p.count(Stage::Reviewed) == 0)
            throw StageError("collapse-repeats: no correct entries (run triage first)");
        return collapse_target_duplicates(p, o.actor);
    });
    write_lists(*store);
    store->write_snapshot();
    out << fmt::format("collapse-repeats: {} entries marked repeated\n", n);
    return kExitOk;
}

int cmd_export_lists(const Options& o, std::ostream& out) {
    auto store = open_store(o);
    write_lists(*store);
    out << "export-lists: wrote " << store->exports_dir().string() << '\n';
    return kExitOk;
}

// ---- stats / export -------------------------------------------------------

int cmd_stats(const Options& o, std::ostream& out) {
    auto store = open_store(o);
    const PercentileScheme scheme = scheme_of(o);
    const std::string corpus = store->meta().corpus;
    const fs::path dir = store->exports_dir();

    store->read([&](const Project& p) {
        const PipelineSummary summary = pipeline_summary(p, corpus);
        write_text(dir / "summary.json", summary_to_json(summary).dump(2) + '\n');
        out << format_summary_table(summary);
        if (p.count(State::ReviewedAccurate) == 0) {
            out << "stats: no accurate entries yet; tag distribution skipped\n";
            return 0;
        }
        const TagDistribution dist = distribution(p, scheme);
        ReportOptions ro;
        ro.generated_at = now_string(p);
        write_text(dir / "report.csv", emit_report(dist, ReportFormat::Csv, ro));
        write_text(dir / "report.json", emit_report(dist, ReportFormat::Json, ro));
        write_text(dir / "pie.svg", emit_report(dist, ReportFormat::SvgPie, ro));
        write_text(dir / "percentile.svg", emit_report(dist, ReportFormat::SvgPercentileBars, ro));
        out << fmt::format("stats: {} accurate entries over {} tags, report written to {}\n", dist.total,
                           dist.tag_count, dir.string());
        return 0;
    });
    return kExitOk;
}

int cmd_export_lexicon(const Options& o, std::ostream& out) {
    const auto format = parse_lexicon_format(o.format);
    if (!format) throw UsageError("--format: expected tsv, csv or json, got '" + o.format + "'");
    auto store = open_store(o);
    const std::string body = store->read(
        [&](const Project& p) { return export_lexicon(p, *format, now_string(p)); });
    const fs::path path = o.out.empty() ? store->exports_dir() / ("lexicon." + o.format) : fs::path(o.out);
    write_text(path, body);
    const std::size_t n = store->read([](const Project& p) { return p.count(State::ReviewedAccurate); });
    out << fmt::format("export-lexicon: {} entries written to {}\n", n, path.string());
    return kExitOk;
}

// ---- serve ----------------------------------------------------------------

ApiServer* g_server = nullptr;

extern "C" void on_stop_signal(int) {
    if (g_server) g_server->stop();
}

int cmd_serve(const Options& o, std::ostream& out) {
    auto store = open_store(o);
    ApiOptions api;
    if (const char* token = std::getenv("TAGLEX_TOKEN")) api.token = token;
    api.pronouns = pronoun_list(o);
    api.scheme = scheme_of(o);
    api.static_dir = o.static_dir;

    ApiServer server(*store, api);
    const int port = server.bind(o.bind, o.port);
    if (port < 0) throw IoError(fmt::format("cannot bind {}:{}", o.bind, o.port));
    out << fmt::format("serve: listening on http://{}:{}\n", o.bind, port) << std::flush;

    g_server = &server;
    std::signal(SIGINT, on_stop_signal);
    std::signal(SIGTERM, on_stop_signal);
    server.listen();
    g_server = nullptr;
    store->write_snapshot();
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Build a POS-tagged lexicon for a new language from a tagged corpus.", "taglex"};
    app.set_config("--config", "", "Read options from a key = value file");
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--project", o.project, "Project directory")->required();
        sub->add_option("--actor", o.actor, "Name recorded on journal events");
    };

    auto* ingest = app.add_subcommand("ingest", "Parse, normalize and deduplicate a tagged corpus");
    add_common(ingest);
    ingest->add_option("--corpus", o.corpus, "surface<DELIM>tag file, one token per line")
        ->required()
        ->check(CLI::ExistingFile);
    ingest->add_option("--delimiter", o.delimiter, "auto, tab, space or a single character");
    ingest->add_option("--comment", o.comment, "Prefix of comment lines");
    ingest->add_option("--tagset", o.tagset, "Tagset JSON (default: bundled Bijankhan set)")
        ->check(CLI::ExistingFile);
    ingest->add_option("--name", o.name, "Project name");

    auto* translate = app.add_subcommand("translate", "Machine-translate deduplicated entries");
    add_common(translate);
    translate->add_option("--backend", o.backend, "stub or http");
    translate->add_option("--dictionary", o.dictionary, "source<TAB>target file for the stub backend")
        ->check(CLI::ExistingFile);
    translate->add_option("--fallback-dictionary", o.fallback_dictionary,
                          "Dictionary tried for items the backend misses")
        ->check(CLI::ExistingFile);
    translate->add_option("--miss-policy", o.miss_policy, "Stub behavior on a miss: echo or fail");
    translate->add_option("--endpoint", o.endpoint, "URL of the HTTP backend (key from TAGLEX_API_KEY)");
    translate->add_option("--batch-size", o.batch_size, "Items per backend call");
    translate->add_option("--max-in-flight", o.max_in_flight, "Concurrent backend calls");
    translate->add_option("--retries", o.retries, "Retries per batch");
    translate->add_option("--rate", o.rate, "Backend calls per second");
    translate->add_option("--from", o.from, "Source language");
    translate->add_option("--to", o.to, "Target language");

    auto* triage_export = app.add_subcommand("triage-export", "Write unlabeled entries for bulk labeling");
    add_common(triage_export);
    triage_export->add_option("--out", o.out, "Output CSV (default exports/triage.csv)");

    auto* triage_import = app.add_subcommand("triage-import", "Apply labels from a triage CSV");
    add_common(triage_import);
    triage_import->add_option("--in", o.in, "Labeled triage CSV")->required()->check(CLI::ExistingFile);

    auto* review = app.add_subcommand("review", "Record accuracy verdicts and trivial edits");
    add_common(review);
    review->add_option("--id", o.id, "Entry id (omit to list the queue)");
    review->add_option("--verdict", o.verdict, "accurate or concerned");
    review->add_option("--strip", o.strip, "Strip a pronoun: leading or trailing");
    review->add_option("--after", o.after, "Replace the translation");
    review->add_option("--seq", o.seq, "Entry revision last seen");
    review->add_option("--pronouns", o.pronouns, "Pronoun tokens to strip")->delimiter(',');

    auto* collapse = app.add_subcommand("collapse-repeats", "Mark repeated target forms");
    add_common(collapse);

    auto* lists = app.add_subcommand("export-lists", "Write the six triage and review lists");
    add_common(lists);

    auto* stats = app.add_subcommand("stats", "Print the pipeline summary and write reports");
    add_common(stats);
    stats->add_option("--percentile-scheme", o.scheme, "rank/n or rank/(n+1)");

    auto* lexicon = app.add_subcommand("export-lexicon", "Write the finished lexicon");
    add_common(lexicon);
    lexicon->add_option("--format", o.format, "tsv, csv or json");
    lexicon->add_option("--out", o.out, "Output file (default exports/lexicon.<format>)");

    auto* serve = app.add_subcommand("serve", "Serve the review API (token from TAGLEX_TOKEN)");
    add_common(serve);
    serve->add_option("--bind", o.bind, "Address to listen on");
    serve->add_option("--port", o.port, "Port (0 picks a free one)");
    serve->add_option("--static-dir", o.static_dir, "UI assets served at /");
    serve->add_option("--pronouns", o.pronouns, "Pronoun tokens to strip")->delimiter(',');
    serve->add_option("--percentile-scheme", o.scheme, "rank/n or rank/(n+1)");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*ingest) return cmd_ingest(o, out);
        if (*translate) return cmd_translate(o, out, err);
        if (*triage_export) return cmd_triage_export(o, out);
        if (*triage_import) return cmd_triage_import(o, out);
        if (*review) return cmd_review(o, out);
        if (*collapse) return cmd_collapse(o, out);
        if (*lists) return cmd_export_lists(o, out);
        if (*stats) return cmd_stats(o, out);
        if (*lexicon) return cmd_export_lexicon(o, out);
        if (*serve) return cmd_serve(o, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    }
    return kExitUsage;
}

}  // namespace taglex
