#pragma once

#include "taglex/timestamp.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace taglex {

enum class Label { Correct, NotCorrect, Undecided };
enum class Verdict { Accurate, Repeated, Concerned };

/// Lifecycle of a lexicon entry:
///   Raw -> Deduped -> Translated -> Labeled(label) -> Reviewed(verdict)
/// Reviewed is only reachable from Labeled(Correct).
enum class State {
    Raw,
    Deduped,
    Translated,
    LabeledCorrect,
    LabeledNotCorrect,
    LabeledUndecided,
    ReviewedAccurate,
    ReviewedRepeated,
    ReviewedConcerned,
};

inline constexpr std::size_t kStateCount = 9;

inline constexpr State kAllStates[kStateCount] = {
    State::Raw,
    State::Deduped,
    State::Translated,
    State::LabeledCorrect,
    State::LabeledNotCorrect,
    State::LabeledUndecided,
    State::ReviewedAccurate,
    State::ReviewedRepeated,
    State::ReviewedConcerned,
};

enum class Stage { Raw = 0, Deduped = 1, Translated = 2, Labeled = 3, Reviewed = 4 };

Stage stage_of(State s);
std::optional<Label> label_of(State s);
std::optional<Verdict> verdict_of(State s);
State labeled(Label l);
State reviewed(Verdict v);

std::string_view to_string(State s);
std::string_view to_string(Label l);
std::string_view to_string(Verdict v);
std::optional<State> parse_state(std::string_view s);
std::optional<Label> parse_label(std::string_view s);
std::optional<Verdict> parse_verdict(std::string_view s);

enum class EditReason { StripLeadingPronoun, StripTrailingPronoun, Manual };

std::string_view to_string(EditReason r);
std::optional<EditReason> parse_edit_reason(std::string_view s);

struct EditRecord {
    Timestamp at;
    std::string before;
    std::string after;
    EditReason reason = EditReason::Manual;

    bool operator==(const EditRecord&) const = default;
};

struct LexiconEntry {
    std::string id;
    std::string source_form;
    std::string tag;
    std::uint64_t frequency = 1;
    std::optional<std::string> translation;
    State state = State::Raw;
    bool ar_flag = false;
    /// Set when triage found this entry repeats an earlier Correct source form;
    /// such entries stay Labeled(Correct) but leave the review pool.
    bool source_repeat = false;
    std::vector<EditRecord> edits;
    /// seq of the last event applied to this entry (0 if none).
    std::uint64_t revision = 0;

    bool operator==(const LexiconEntry&) const = default;
};

/// Content hash of (source_form, tag): 16 lowercase hex digits.
std::string entry_id(std::string_view source_form, std::string_view tag);

/// Entries in Labeled(Correct) that still await an accuracy verdict.
inline bool in_review_pool(const LexiconEntry& e) {
    return e.state == State::LabeledCorrect && !e.source_repeat;
}

}  // namespace taglex
