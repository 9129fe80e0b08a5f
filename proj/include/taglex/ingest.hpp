#pragma once

#include "taglex/entry.hpp"
#include "taglex/tagset.hpp"

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace taglex {

class Project;

struct CorpusToken {
    std::string surface;
    std::string tag;
    std::size_t line_no = 0;

    bool operator==(const CorpusToken&) const = default;
};

enum class DelimiterKind { Auto, Tab, Space, Custom };

/// Layout of a `surface<DELIM>tag` corpus. UTF-8 only.
struct CorpusFormat {
    DelimiterKind delimiter = DelimiterKind::Auto;
    char custom = '\0';
    std::optional<std::string> comment_prefix;

    /// Throws InvalidArgument if the custom delimiter could occur in a tag code.
    void validate() const;
};

/// Parses "auto", "tab", "space", or a single character.
CorpusFormat parse_delimiter(std::string_view spec);

enum class QuarantineReason { UnknownTag, EmptySurface, MalformedLine };

std::string_view to_string(QuarantineReason r);

struct QuarantineRecord {
    std::size_t line_no = 0;
    std::string raw_line;
    QuarantineReason reason = QuarantineReason::MalformedLine;

    bool operator==(const QuarantineRecord&) const = default;
};

struct ParseResult {
    std::vector<CorpusToken> tokens;
    std::vector<QuarantineRecord> quarantine;
    /// Delimiter actually used (resolved from Auto by majority vote).
    char delimiter = '\t';
};

/// Reads one token per line. Blank and comment lines are skipped; every other
/// line yields exactly one token or one quarantine record. Invalid UTF-8
/// throws EncodingError, stream failures IoError.
ParseResult parse_corpus(std::istream& in, const CorpusFormat& format, const TagSet& tagset);

/// One Deduped entry per distinct (normalize(surface), tag), carrying the
/// occurrence count, sorted by (tag, source_form).
std::vector<LexiconEntry> dedup(const std::vector<CorpusToken>& tokens);

/// Commits Create events for entries the project does not have yet. An entry
/// already present with a different frequency is a StageError (a different
/// corpus). Returns the number of entries added.
std::size_t add_entries(Project& project, const std::vector<LexiconEntry>& entries,
                        const std::string& actor);

/// `id,source_form,tag,frequency`
void write_entries_csv(std::ostream& out, const std::vector<LexiconEntry>& entries);
/// `line_no,reason,raw_line`
void write_quarantine_csv(std::ostream& out, const std::vector<QuarantineRecord>& records);

}  // namespace taglex
