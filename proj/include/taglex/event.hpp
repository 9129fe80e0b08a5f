#pragma once

#include "taglex/entry.hpp"
#include "taglex/timestamp.hpp"

#include <cstdint>
#include <string>
#include <variant>

namespace taglex {

enum class EventKind { Create, Translate, Label, Unlabel, Edit, Verdict, Flag };

std::string_view to_string(EventKind k);
std::optional<EventKind> parse_event_kind(std::string_view s);

struct CreatePayload {
    std::string source_form;
    std::string tag;
    std::uint64_t frequency = 1;
    bool operator==(const CreatePayload&) const = default;
};

struct TranslatePayload {
    std::string translation;
    bool operator==(const TranslatePayload&) const = default;
};

struct LabelPayload {
    Label label = Label::Undecided;
    bool operator==(const LabelPayload&) const = default;
};

/// Compensating event: returns a labeled entry to Translated.
struct UnlabelPayload {
    bool operator==(const UnlabelPayload&) const = default;
};

struct EditPayload {
    std::string before;
    std::string after;
    EditReason reason = EditReason::Manual;
    bool operator==(const EditPayload&) const = default;
};

struct VerdictPayload {
    Verdict verdict = Verdict::Concerned;
    bool operator==(const VerdictPayload&) const = default;
};

enum class FlagKind { Ar, SourceRepeat };

std::string_view to_string(FlagKind f);
std::optional<FlagKind> parse_flag_kind(std::string_view s);

struct FlagPayload {
    FlagKind flag = FlagKind::Ar;
    /// For SourceRepeat: id of the earlier entry this one repeats.
    std::string duplicate_of;
    bool operator==(const FlagPayload&) const = default;
};

using EventPayload = std::variant<CreatePayload, TranslatePayload, LabelPayload, UnlabelPayload,
                                  EditPayload, VerdictPayload, FlagPayload>;

struct ReviewEvent {
    std::uint64_t seq = 0;
    std::string entry_id;
    EventPayload payload;
    std::string actor;
    Timestamp ts{};

    EventKind kind() const { return static_cast<EventKind>(payload.index()); }
    bool operator==(const ReviewEvent&) const = default;
};

/// Builds the entry a Create event introduces (state Deduped).
LexiconEntry make_entry(const ReviewEvent& create);

/// Pure state transition. Returns the updated entry; `entry` is untouched.
/// Throws UnknownEntry if the event names another entry, IllegalTransition
/// for moves the lifecycle forbids, NotArTagged, Conflict or InvalidArgument.
LexiconEntry transition(const LexiconEntry& entry, const ReviewEvent& event);

}  // namespace taglex
