#include "taglex/lexicon.hpp"

#include "taglex/csv.hpp"
#include "taglex/error.hpp"
#include "taglex/project.hpp"
#include "taglex/tagset.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>
#include <vector>

namespace taglex {

namespace {

// A TSV field cannot carry its own delimiters.
std::string tsv_field(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c == '\t' || c == '\n' || c == '\r') c = ' ';
    return out;
}

}  // namespace

std::optional<LexiconFormat> parse_lexicon_format(std::string_view s) {
    if (s == "tsv") return LexiconFormat::Tsv;
    if (s == "csv") return LexiconFormat::Csv;
    if (s == "json") return LexiconFormat::Json;
    return std::nullopt;
}

std::string export_lexicon(const Project& project, LexiconFormat format,
                           const std::string& generated_at) {
    std::vector<const LexiconEntry*> rows;
    for (const auto& e : project.entries())
        if (e.state == State::ReviewedAccurate) rows.push_back(&e);
    if (rows.empty()) throw EmptyLexicon();
    std::sort(rows.begin(), rows.end(), [](const LexiconEntry* a, const LexiconEntry* b) {
        if (a->tag != b->tag) return tag_code_less(a->tag, b->tag);
        if (*a->translation != *b->translation) return *a->translation < *b->translation;
        return a->source_form < b->source_form;
    });

    if (format == LexiconFormat::Json) {
        nlohmann::ordered_json entries = nlohmann::ordered_json::array();
        for (const auto* e : rows) {
            entries.push_back({{"target_form", *e->translation},
                               {"tag", e->tag},
                               {"source_form", e->source_form},
                               {"frequency", e->frequency}});
        }
        nlohmann::ordered_json doc = {{"license", kLexiconLicense},
                                      {"generator", std::string(kToolName) + " " + std::string(kToolVersion)},
                                      {"generated_at", generated_at},
                                      {"entries", std::move(entries)}};
        return doc.dump(2) + '\n';
    }

    std::ostringstream out;
    out << "# " << project.name() << " POS-tagged lexicon\n";
    out << "# license: " << kLexiconLicense << '\n';
    out << "# generator: " << kToolName << ' ' << kToolVersion << '\n';
    out << "# generated_at: " << generated_at << '\n';
    if (format == LexiconFormat::Tsv) {
        for (const auto* e : rows) out << tsv_field(*e->translation) << '\t' << e->tag << '\n';
    } else {
        out << csv::format_row({"target_form", "tag", "source_form", "frequency"});
        for (const auto* e : rows)
            out << csv::format_row(
                {*e->translation, e->tag, e->source_form, std::to_string(e->frequency)});
    }
    return out.str();
}

}  // namespace taglex
