#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace taglex {

class Project;

inline constexpr std::string_view kToolName = "taglex";
inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::string_view kLexiconLicense = "CC-BY-NC-SA-4.0";

enum class LexiconFormat { Tsv, Csv, Json };

std::optional<LexiconFormat> parse_lexicon_format(std::string_view s);

/// The finished lexicon: Reviewed(Accurate) entries only, sorted by
/// (tag, target form). TSV rows are `target_form<TAB>tag`; CSV and JSON add
/// source_form and frequency. Text formats open with `#` lines carrying the
/// license, tool version and `generated_at`. Throws EmptyLexicon.
std::string export_lexicon(const Project& project, LexiconFormat format,
                           const std::string& generated_at);

}  // namespace taglex
