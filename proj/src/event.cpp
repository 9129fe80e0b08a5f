#include "taglex/event.hpp"

#include "taglex/error.hpp"
#include "taglex/tagset.hpp"

#include <fmt/format.h>

namespace taglex {

std::string_view to_string(EventKind k) {
    switch (k) {
        case EventKind::Create: return "create";
        case EventKind::Translate: return "translate";
        case EventKind::Label: return "label";
        case EventKind::Unlabel: return "unlabel";
        case EventKind::Edit: return "edit";
        case EventKind::Verdict: return "verdict";
        case EventKind::Flag: return "flag";
    }
    return "flag";
}

std::optional<EventKind> parse_event_kind(std::string_view s) {
    for (auto k : {EventKind::Create, EventKind::Translate, EventKind::Label, EventKind::Unlabel,
                   EventKind::Edit, EventKind::Verdict, EventKind::Flag})
        if (to_string(k) == s) return k;
    return std::nullopt;
}

std::string_view to_string(FlagKind f) {
    return f == FlagKind::Ar ? "ar" : "source-repeat";
}

std::optional<FlagKind> parse_flag_kind(std::string_view s) {
    if (s == "ar") return FlagKind::Ar;
    if (s == "source-repeat") return FlagKind::SourceRepeat;
    return std::nullopt;
}

LexiconEntry make_entry(const ReviewEvent& create) {
    const auto* p = std::get_if<CreatePayload>(&create.payload);
    if (!p) throw InvalidArgument("make_entry requires a create event");
    if (p->frequency == 0) throw InvalidArgument("entry frequency must be >= 1");
    if (p->source_form.empty()) throw InvalidArgument("entry source form is empty");
    if (create.entry_id != entry_id(p->source_form, p->tag))
        throw InvalidArgument("entry id does not match (source_form, tag)");

    LexiconEntry e;
    e.id = create.entry_id;
    e.source_form = p->source_form;
    e.tag = p->tag;
    e.frequency = p->frequency;
    e.state = State::Deduped;
    e.revision = create.seq;
    return e;
}

namespace {

[[noreturn]] void illegal(const LexiconEntry& e, std::string_view what) {
    throw IllegalTransition(
        fmt::format("{}: {} not allowed in state {}", e.id, what, to_string(e.state)));
}

struct Apply {
    LexiconEntry& e;
    const ReviewEvent& ev;

    void operator()(const CreatePayload&) const { illegal(e, "create"); }

    void operator()(const TranslatePayload& p) const {
        if (e.state != State::Deduped) illegal(e, "translate");
        if (p.translation.empty()) throw InvalidArgument("empty translation");
        e.translation = p.translation;
        e.state = State::Translated;
    }

    void operator()(const LabelPayload& p) const {
        if (e.state != State::Translated) illegal(e, "label");
        e.state = labeled(p.label);
    }

    void operator()(const UnlabelPayload&) const {
        if (stage_of(e.state) != Stage::Labeled) illegal(e, "unlabel");
        e.state = State::Translated;
        e.source_repeat = false;
    }

    void operator()(const EditPayload& p) const {
        if (e.state != State::Translated && e.state != State::LabeledCorrect) illegal(e, "edit");
        if (p.after.empty()) throw InvalidArgument("edit would leave an empty translation");
        if (!e.translation || *e.translation != p.before)
            throw Conflict(e.id + ": translation changed since it was read");
        e.translation = p.after;
        e.edits.push_back({ev.ts, p.before, p.after, p.reason});
    }

    void operator()(const VerdictPayload&) const {
        if (e.state != State::LabeledCorrect) illegal(e, "verdict");
        if (e.source_repeat) illegal(e, "verdict on a repeated source entry");
        e.state = reviewed(std::get<VerdictPayload>(ev.payload).verdict);
    }

    void operator()(const FlagPayload& p) const {
        if (p.flag == FlagKind::Ar) {
            if (e.tag != kArTag) throw NotArTagged(e.id + " is tagged " + e.tag + ", not AR");
            e.ar_flag = true;
        } else {
            if (e.state != State::LabeledCorrect) illegal(e, "source-repeat flag");
            e.source_repeat = true;
        }
    }
};

}  // namespace

LexiconEntry transition(const LexiconEntry& entry, const ReviewEvent& event) {
    if (event.entry_id != entry.id) throw UnknownEntry(event.entry_id);
    LexiconEntry next = entry;
    std::visit(Apply{next, event}, event.payload);
    next.revision = event.seq;
    return next;
}

}  // namespace taglex
