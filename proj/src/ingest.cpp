#include "taglex/ingest.hpp"

#include "taglex/csv.hpp"
#include "taglex/error.hpp"
#include "taglex/project.hpp"
#include "taglex/unicode.hpp"

#include <algorithm>
#include <map>

namespace taglex {

namespace {

constexpr std::size_t kDetectWindow = 100;

bool is_blank(std::string_view line) {
    return line.find_first_not_of(" \t\v\f") == std::string_view::npos;
}

std::string_view trim_ascii(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

char vote_delimiter(const std::vector<std::string>& lines) {
    std::size_t tab = 0;
    std::size_t space = 0;
    for (const auto& l : lines) {
        if (l.find('\t') != std::string::npos)
            ++tab;
        else if (trim_ascii(l).find(' ') != std::string_view::npos)
            ++space;
    }
    return space > tab ? ' ' : '\t';
}

}  // namespace

void CorpusFormat::validate() const {
    if (delimiter == DelimiterKind::Custom &&
        ((custom >= 'A' && custom <= 'Z') || custom == '_' || custom == '\n' || custom == '\0'))
        throw InvalidArgument(std::string("delimiter '") + custom + "' may occur in a tag code");
}

CorpusFormat parse_delimiter(std::string_view spec) {
    CorpusFormat f;
    if (spec == "auto") {
        f.delimiter = DelimiterKind::Auto;
    } else if (spec == "tab" || spec == "\t") {
        f.delimiter = DelimiterKind::Tab;
    } else if (spec == "space" || spec == " ") {
        f.delimiter = DelimiterKind::Space;
    } else if (spec.size() == 1) {
        f.delimiter = DelimiterKind::Custom;
        f.custom = spec[0];
    } else {
        throw InvalidArgument("unknown delimiter '" + std::string(spec) + "'");
    }
    f.validate();
    return f;
}

std::string_view to_string(QuarantineReason r) {
    switch (r) {
        case QuarantineReason::UnknownTag: return "unknown-tag";
        case QuarantineReason::EmptySurface: return "empty-surface";
        case QuarantineReason::MalformedLine: return "malformed-line";
    }
    return "malformed-line";
}

ParseResult parse_corpus(std::istream& in, const CorpusFormat& format, const TagSet& tagset) {
    format.validate();
    ParseResult result;

    auto classify = [&](std::string line, std::size_t line_no) {
        const auto cut = line.rfind(result.delimiter);
        if (cut == std::string::npos) {
            result.quarantine.push_back({line_no, std::move(line), QuarantineReason::MalformedLine});
            return;
        }
        const std::string tag(trim_ascii(std::string_view(line).substr(cut + 1)));
        const std::string_view surface = std::string_view(line).substr(0, cut);
        if (tag.empty()) {
            result.quarantine.push_back({line_no, std::move(line), QuarantineReason::MalformedLine});
        } else if (unicode::normalize(surface).empty()) {
            result.quarantine.push_back({line_no, std::move(line), QuarantineReason::EmptySurface});
        } else if (!tagset.contains(tag)) {
            result.quarantine.push_back({line_no, std::move(line), QuarantineReason::UnknownTag});
        } else {
            result.tokens.push_back({std::string(surface), tag, line_no});
        }
    };

    bool resolved = true;
    switch (format.delimiter) {
        case DelimiterKind::Tab: result.delimiter = '\t'; break;
        case DelimiterKind::Space: result.delimiter = ' '; break;
        case DelimiterKind::Custom: result.delimiter = format.custom; break;
        case DelimiterKind::Auto: resolved = false; break;
    }

    std::vector<std::string> pending;
    std::vector<std::size_t> pending_no;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
        if (auto bad = unicode::find_invalid_utf8(line))
            throw EncodingError(line_no, "invalid UTF-8 at byte " + std::to_string(*bad));
        if (is_blank(line)) continue;
        if (format.comment_prefix && !format.comment_prefix->empty() &&
            line.starts_with(*format.comment_prefix))
            continue;

        if (resolved) {
            classify(std::move(line), line_no);
            continue;
        }
        pending.push_back(std::move(line));
        pending_no.push_back(line_no);
        if (pending.size() == kDetectWindow) {
            result.delimiter = vote_delimiter(pending);
            resolved = true;
            for (std::size_t i = 0; i < pending.size(); ++i)
                classify(std::move(pending[i]), pending_no[i]);
            pending.clear();
        }
    }
    if (in.bad()) throw IoError("read error in corpus stream");
    if (!resolved) {
        result.delimiter = vote_delimiter(pending);
        for (std::size_t i = 0; i < pending.size(); ++i)
            classify(std::move(pending[i]), pending_no[i]);
    }
    return result;
}

std::vector<LexiconEntry> dedup(const std::vector<CorpusToken>& tokens) {
    // (tag, form) ordering is the output order.
    std::map<std::pair<std::string, std::string>, std::uint64_t> counts;
    for (const auto& t : tokens) ++counts[{t.tag, unicode::normalize(t.surface)}];

    std::vector<LexiconEntry> out;
    out.reserve(counts.size());
    for (const auto& [key, n] : counts) {
        LexiconEntry e;
        e.tag = key.first;
        e.source_form = key.second;
        e.id = entry_id(e.source_form, e.tag);
        e.frequency = n;
        e.state = State::Deduped;
        out.push_back(std::move(e));
    }
    return out;
}

std::size_t add_entries(Project& project, const std::vector<LexiconEntry>& entries,
                        const std::string& actor) {
    for (const auto& e : entries) {
        if (const auto* have = project.find(e.id);
            have && (have->frequency != e.frequency || have->source_form != e.source_form))
            throw StageError("project already holds a different ingest (entry " + e.id + ")");
    }
    std::size_t added = 0;
    for (const auto& e : entries) {
        if (project.find(e.id)) continue;
        project.commit(e.id, CreatePayload{e.source_form, e.tag, e.frequency}, actor);
        ++added;
    }
    return added;
}

void write_entries_csv(std::ostream& out, const std::vector<LexiconEntry>& entries) {
    out << csv::format_row({"id", "source_form", "tag", "frequency"});
    for (const auto& e : entries)
        out << csv::format_row({e.id, e.source_form, e.tag, std::to_string(e.frequency)});
}

void write_quarantine_csv(std::ostream& out, const std::vector<QuarantineRecord>& records) {
    out << csv::format_row({"line_no", "reason", "raw_line"});
    for (const auto& r : records)
        out << csv::format_row(
            {std::to_string(r.line_no), std::string(to_string(r.reason)), r.raw_line});
}

}  // namespace taglex
