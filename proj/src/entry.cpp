#include "taglex/entry.hpp"

#include <fmt/format.h>

namespace taglex {

Stage stage_of(State s) {
    switch (s) {
        case State::Raw: return Stage::Raw;
        case State::Deduped: return Stage::Deduped;
        case State::Translated: return Stage::Translated;
        case State::LabeledCorrect:
        case State::LabeledNotCorrect:
        case State::LabeledUndecided: return Stage::Labeled;
        case State::ReviewedAccurate:
        case State::ReviewedRepeated:
        case State::ReviewedConcerned: return Stage::Reviewed;
    }
    return Stage::Raw;
}

std::optional<Label> label_of(State s) {
    switch (s) {
        case State::LabeledCorrect: return Label::Correct;
        case State::LabeledNotCorrect: return Label::NotCorrect;
        case State::LabeledUndecided: return Label::Undecided;
        default: return std::nullopt;
    }
}

std::optional<Verdict> verdict_of(State s) {
    switch (s) {
        case State::ReviewedAccurate: return Verdict::Accurate;
        case State::ReviewedRepeated: return Verdict::Repeated;
        case State::ReviewedConcerned: return Verdict::Concerned;
        default: return std::nullopt;
    }
}

State labeled(Label l) {
    switch (l) {
        case Label::Correct: return State::LabeledCorrect;
        case Label::NotCorrect: return State::LabeledNotCorrect;
        case Label::Undecided: return State::LabeledUndecided;
    }
    return State::LabeledUndecided;
}

State reviewed(Verdict v) {
    switch (v) {
        case Verdict::Accurate: return State::ReviewedAccurate;
        case Verdict::Repeated: return State::ReviewedRepeated;
        case Verdict::Concerned: return State::ReviewedConcerned;
    }
    return State::ReviewedConcerned;
}

std::string_view to_string(State s) {
    switch (s) {
        case State::Raw: return "raw";
        case State::Deduped: return "deduped";
        case State::Translated: return "translated";
        case State::LabeledCorrect: return "labeled:correct";
        case State::LabeledNotCorrect: return "labeled:not-correct";
        case State::LabeledUndecided: return "labeled:undecided";
        case State::ReviewedAccurate: return "reviewed:accurate";
        case State::ReviewedRepeated: return "reviewed:repeated";
        case State::ReviewedConcerned: return "reviewed:concerned";
    }
    return "raw";
}

std::string_view to_string(Label l) {
    switch (l) {
        case Label::Correct: return "correct";
        case Label::NotCorrect: return "not-correct";
        case Label::Undecided: return "undecided";
    }
    return "undecided";
}

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Accurate: return "accurate";
        case Verdict::Repeated: return "repeated";
        case Verdict::Concerned: return "concerned";
    }
    return "concerned";
}

std::optional<State> parse_state(std::string_view s) {
    for (State st : kAllStates)
        if (to_string(st) == s) return st;
    return std::nullopt;
}

std::optional<Label> parse_label(std::string_view s) {
    for (Label l : {Label::Correct, Label::NotCorrect, Label::Undecided})
        if (to_string(l) == s) return l;
    return std::nullopt;
}

std::optional<Verdict> parse_verdict(std::string_view s) {
    for (Verdict v : {Verdict::Accurate, Verdict::Repeated, Verdict::Concerned})
        if (to_string(v) == s) return v;
    return std::nullopt;
}

std::string_view to_string(EditReason r) {
    switch (r) {
        case EditReason::StripLeadingPronoun: return "strip-leading-pronoun";
        case EditReason::StripTrailingPronoun: return "strip-trailing-pronoun";
        case EditReason::Manual: return "manual";
    }
    return "manual";
}

std::optional<EditReason> parse_edit_reason(std::string_view s) {
    for (auto r : {EditReason::StripLeadingPronoun, EditReason::StripTrailingPronoun,
                   EditReason::Manual})
        if (to_string(r) == s) return r;
    return std::nullopt;
}

std::string entry_id(std::string_view source_form, std::string_view tag) {
    // FNV-1a, 64-bit, over "source_form \x1f tag".
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](unsigned char c) {
        h ^= c;
        h *= 0x100000001b3ULL;
    };
    for (char c : source_form) mix(static_cast<unsigned char>(c));
    mix(0x1f);
    for (char c : tag) mix(static_cast<unsigned char>(c));
    return fmt::format("{:016x}", h);
}

}  // namespace taglex
