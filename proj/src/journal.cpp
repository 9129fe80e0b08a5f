#include "taglex/journal.hpp"

#include "taglex/error.hpp"

#include <fmt/format.h>
#include <unistd.h>

#include <fstream>
#include <sstream>

namespace taglex {

using ojson = nlohmann::ordered_json;

namespace {

struct PayloadToJson {
    ojson operator()(const CreatePayload& p) const {
        return {{"source_form", p.source_form}, {"tag", p.tag}, {"frequency", p.frequency}};
    }
    ojson operator()(const TranslatePayload& p) const { return {{"translation", p.translation}}; }
    ojson operator()(const LabelPayload& p) const { return {{"label", to_string(p.label)}}; }
    ojson operator()(const UnlabelPayload&) const { return ojson::object(); }
    ojson operator()(const EditPayload& p) const {
        return {{"before", p.before}, {"after", p.after}, {"reason", to_string(p.reason)}};
    }
    ojson operator()(const VerdictPayload& p) const { return {{"verdict", to_string(p.verdict)}}; }
    ojson operator()(const FlagPayload& p) const {
        ojson j = {{"flag", to_string(p.flag)}};
        if (!p.duplicate_of.empty()) j["duplicate_of"] = p.duplicate_of;
        return j;
    }
};

template <typename T, typename Parse>
T parse_enum(const nlohmann::json& j, const char* key, Parse parse) {
    auto v = parse(j.at(key).get<std::string>());
    if (!v) throw InvalidArgument(fmt::format("bad {} '{}'", key, j.at(key).get<std::string>()));
    return *v;
}

EventPayload payload_from_json(EventKind kind, const nlohmann::json& p) {
    switch (kind) {
        case EventKind::Create:
            return CreatePayload{p.at("source_form").get<std::string>(), p.at("tag").get<std::string>(),
                                 p.at("frequency").get<std::uint64_t>()};
        case EventKind::Translate:
            return TranslatePayload{p.at("translation").get<std::string>()};
        case EventKind::Label:
            return LabelPayload{parse_enum<Label>(p, "label", parse_label)};
        case EventKind::Unlabel:
            return UnlabelPayload{};
        case EventKind::Edit:
            return EditPayload{p.at("before").get<std::string>(), p.at("after").get<std::string>(),
                               parse_enum<EditReason>(p, "reason", parse_edit_reason)};
        case EventKind::Verdict:
            return VerdictPayload{parse_enum<Verdict>(p, "verdict", parse_verdict)};
        case EventKind::Flag:
            return FlagPayload{parse_enum<FlagKind>(p, "flag", parse_flag_kind),
                               p.value("duplicate_of", std::string())};
    }
    throw InvalidArgument("unknown event kind");
}

ojson entry_to_json(const LexiconEntry& e) {
    ojson edits = ojson::array();
    for (const auto& ed : e.edits) {
        edits.push_back({{"at", format_rfc3339(ed.at)},
                         {"before", ed.before},
                         {"after", ed.after},
                         {"reason", to_string(ed.reason)}});
    }
    return {{"id", e.id},
            {"source_form", e.source_form},
            {"tag", e.tag},
            {"frequency", e.frequency},
            {"translation", e.translation ? ojson(*e.translation) : ojson(nullptr)},
            {"state", to_string(e.state)},
            {"ar_flag", e.ar_flag},
            {"source_repeat", e.source_repeat},
            {"revision", e.revision},
            {"edits", std::move(edits)}};
}

LexiconEntry entry_from_json(const nlohmann::json& j) {
    LexiconEntry e;
    e.id = j.at("id").get<std::string>();
    e.source_form = j.at("source_form").get<std::string>();
    e.tag = j.at("tag").get<std::string>();
    e.frequency = j.at("frequency").get<std::uint64_t>();
    if (!j.at("translation").is_null()) e.translation = j.at("translation").get<std::string>();
    e.state = parse_enum<State>(j, "state", parse_state);
    e.ar_flag = j.at("ar_flag").get<bool>();
    e.source_repeat = j.at("source_repeat").get<bool>();
    e.revision = j.at("revision").get<std::uint64_t>();
    for (const auto& ed : j.at("edits")) {
        auto at = parse_rfc3339(ed.at("at").get<std::string>());
        if (!at) throw InvalidArgument("bad edit timestamp");
        e.edits.push_back({*at, ed.at("before").get<std::string>(), ed.at("after").get<std::string>(),
                           parse_enum<EditReason>(ed, "reason", parse_edit_reason)});
    }
    if (e.id != entry_id(e.source_form, e.tag)) throw InvalidArgument("entry id mismatch: " + e.id);
    if ((stage_of(e.state) >= Stage::Translated) != e.translation.has_value())
        throw InvalidArgument("translation presence does not match state for " + e.id);
    return e;
}

}  // namespace

ojson event_to_json(const ReviewEvent& ev) {
    return {{"seq", ev.seq},
            {"entry_id", ev.entry_id},
            {"kind", to_string(ev.kind())},
            {"payload", std::visit(PayloadToJson{}, ev.payload)},
            {"actor", ev.actor},
            {"ts", format_rfc3339(ev.ts)}};
}

ReviewEvent event_from_json(const nlohmann::json& j) {
    try {
        ReviewEvent ev;
        ev.seq = j.at("seq").get<std::uint64_t>();
        ev.entry_id = j.at("entry_id").get<std::string>();
        const auto kind = parse_enum<EventKind>(j, "kind", parse_event_kind);
        ev.payload = payload_from_json(kind, j.at("payload"));
        ev.actor = j.at("actor").get<std::string>();
        auto ts = parse_rfc3339(j.at("ts").get<std::string>());
        if (!ts) throw InvalidArgument("bad timestamp");
        ev.ts = *ts;
        return ev;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed event: ") + e.what());
    }
}

std::string format_journal_line(const ReviewEvent& ev) { return event_to_json(ev).dump() + '\n'; }

std::vector<ReviewEvent> read_journal(std::istream& in) {
    std::vector<ReviewEvent> events;
    std::uint64_t last = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        ReviewEvent ev;
        try {
            ev = event_from_json(nlohmann::json::parse(line));
        } catch (const nlohmann::json::exception& e) {
            throw CorruptJournal(last, fmt::format("line {}: {}", line_no, e.what()));
        } catch (const InvalidArgument& e) {
            throw CorruptJournal(last, fmt::format("line {}: {}", line_no, e.what()));
        }
        if (ev.seq != last + 1)
            throw CorruptJournal(last, fmt::format("line {}: seq {} follows {}", line_no, ev.seq, last));
        last = ev.seq;
        events.push_back(std::move(ev));
    }
    if (in.bad()) throw IoError("read error in journal");
    return events;
}

void replay_onto(Project& project, const std::vector<ReviewEvent>& events) {
    for (const auto& ev : events) {
        if (ev.seq <= project.last_seq()) continue;
        try {
            project.apply(ev);
        } catch (const Error& e) {
            throw CorruptJournal(project.last_seq(), fmt::format("seq {}: {}", ev.seq, e.what()));
        }
    }
}

Project journal_replay(const std::vector<ReviewEvent>& events, std::string name, TagSet tagset,
                       Clock clock) {
    Project p(std::move(name), std::move(tagset), std::move(clock));
    replay_onto(p, events);
    return p;
}

std::string snapshot(const Project& project) {
    ojson entries = ojson::array();
    for (const auto& e : project.entries()) entries.push_back(entry_to_json(e));
    ojson doc = {{"format", "taglex-snapshot"},
                 {"version", kSnapshotVersion},
                 {"name", project.name()},
                 {"last_seq", project.last_seq()},
                 {"tagset", project.tagset().to_json()},
                 {"entries", std::move(entries)}};
    return doc.dump(1) + '\n';
}

Project load_snapshot(std::istream& in, Clock clock) {
    try {
        const auto doc = nlohmann::json::parse(in);
        if (doc.at("format") != "taglex-snapshot") throw InvalidArgument("not a taglex snapshot");
        if (doc.at("version") != kSnapshotVersion)
            throw InvalidArgument("unsupported snapshot version " + doc.at("version").dump());
        std::vector<LexiconEntry> entries;
        for (const auto& e : doc.at("entries")) entries.push_back(entry_from_json(e));
        return Project::restore(doc.at("name").get<std::string>(),
                                TagSet::from_json(doc.at("tagset")), std::move(entries),
                                doc.at("last_seq").get<std::uint64_t>(), std::move(clock));
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed snapshot: ") + e.what());
    }
}

JournalWriter::JournalWriter(const std::filesystem::path& path) : path_(path) {
    file_ = std::fopen(path.c_str(), "ab");
    if (!file_) throw IoError("cannot open journal " + path.string());
}

JournalWriter::~JournalWriter() {
    if (file_) std::fclose(file_);
}

void JournalWriter::append(const std::vector<ReviewEvent>& events) {
    if (events.empty()) return;
    std::string buf;
    for (const auto& ev : events) buf += format_journal_line(ev);
    if (std::fwrite(buf.data(), 1, buf.size(), file_) != buf.size() || std::fflush(file_) != 0)
        throw IoError("write failed on journal " + path_.string());
    ::fsync(::fileno(file_));
}

std::size_t repair_torn_tail(const std::filesystem::path& journal_path) {
    std::error_code ec;
    const auto size = std::filesystem::file_size(journal_path, ec);
    if (ec || size == 0) return 0;

    std::ifstream in(journal_path, std::ios::binary);
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (data.back() == '\n') return 0;
    const auto keep = data.rfind('\n') == std::string::npos ? 0 : data.rfind('\n') + 1;
    in.close();
    std::filesystem::resize_file(journal_path, keep);
    return data.size() - keep;
}

}  // namespace taglex
