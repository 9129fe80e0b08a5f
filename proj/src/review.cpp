#include "taglex/review.hpp"

#include "taglex/csv.hpp"
#include "taglex/error.hpp"
#include "taglex/tagset.hpp"
#include "taglex/unicode.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>
#include <sstream>

namespace taglex {

namespace {

const LexiconEntry& checked(const Project& project, std::string_view id,
                            std::optional<std::uint64_t> expected_revision) {
    const auto& e = project.at(id);
    if (expected_revision && *expected_revision != e.revision)
        throw Conflict(fmt::format("{}: entry is at revision {}, caller saw {}", e.id, e.revision,
                                   *expected_revision));
    return e;
}

bool was_correct(const LexiconEntry& e) {
    return (e.state == State::LabeledCorrect || stage_of(e.state) == Stage::Reviewed) &&
           !e.source_repeat;
}

std::optional<std::string> strip_pronoun(std::string_view translation, const PronounList& pronouns,
                                         bool leading) {
    const std::u32string text = unicode::decode(translation);
    for (const auto& p : pronouns.tokens) {
        const std::u32string tok = unicode::decode(p);
        if (tok.empty() || text.size() <= tok.size()) continue;
        std::u32string rest;
        if (leading) {
            if (text.compare(0, tok.size(), tok) != 0 || !unicode::is_space(text[tok.size()]))
                continue;
            rest = text.substr(tok.size());
        } else {
            const std::size_t at = text.size() - tok.size();
            if (text.compare(at, tok.size(), tok) != 0 || !unicode::is_space(text[at - 1]))
                continue;
            rest = text.substr(0, at);
        }
        const auto b = std::find_if_not(rest.begin(), rest.end(), unicode::is_space);
        const auto e = std::find_if_not(rest.rbegin(), rest.rend(), unicode::is_space).base();
        if (b >= e) continue;
        return unicode::encode(std::u32string(b, e));
    }
    return std::nullopt;
}

std::string collapse_key(const LexiconEntry& e) {
    return e.tag + '\x1f' + unicode::normalize(e.translation.value_or(""));
}

// Highest frequency first, then smallest source form.
bool better_representative(const LexiconEntry* a, const LexiconEntry* b) {
    if (a->frequency != b->frequency) return a->frequency > b->frequency;
    if (a->source_form != b->source_form) return a->source_form < b->source_form;
    return a->id < b->id;
}

}  // namespace

std::uint64_t label(Project& project, std::string_view entry_id, Label lbl,
                    const std::string& actor, std::optional<std::uint64_t> expected_revision) {
    const std::string id(checked(project, entry_id, expected_revision).id);
    project.commit(id, LabelPayload{lbl}, actor);

    if (lbl == Label::Correct) {
        const auto& entry = project.at(id);
        for (const auto* other : project.loose_source_group(entry)) {
            if (other->id != id && was_correct(*other)) {
                project.commit(id, FlagPayload{FlagKind::SourceRepeat, other->id}, actor);
                break;
            }
        }
    }
    return project.last_seq();
}

std::uint64_t unlabel(Project& project, std::string_view entry_id, const std::string& actor,
                      std::optional<std::uint64_t> expected_revision) {
    const std::string id(checked(project, entry_id, expected_revision).id);
    return project.commit(id, UnlabelPayload{}, actor).seq;
}

std::optional<std::uint64_t> flag_ar(Project& project, std::string_view entry_id,
                                     const std::string& actor) {
    const auto& e = project.at(entry_id);
    if (e.tag != kArTag) throw NotArTagged(e.id + " is tagged " + e.tag + ", not AR");
    if (e.ar_flag) return std::nullopt;
    return project.commit(e.id, FlagPayload{FlagKind::Ar, {}}, actor).seq;
}

std::optional<std::string> strip_leading_pronoun(std::string_view translation,
                                                 const PronounList& pronouns) {
    return strip_pronoun(translation, pronouns, true);
}

std::optional<std::string> strip_trailing_pronoun(std::string_view translation,
                                                  const PronounList& pronouns) {
    return strip_pronoun(translation, pronouns, false);
}

std::uint64_t trivial_edit(Project& project, std::string_view entry_id, const TrivialEdit& edit,
                           const std::string& actor, const PronounList& pronouns,
                           std::optional<std::uint64_t> expected_revision) {
    const auto& e = checked(project, entry_id, expected_revision);
    if (e.state != State::Translated && e.state != State::LabeledCorrect)
        throw IllegalTransition(
            fmt::format("{}: edit not allowed in state {}", e.id, to_string(e.state)));
    const std::string current = e.translation.value_or("");

    std::string after;
    switch (edit.kind) {
        case EditReason::StripLeadingPronoun:
        case EditReason::StripTrailingPronoun: {
            auto stripped = edit.kind == EditReason::StripLeadingPronoun
                                ? strip_leading_pronoun(current, pronouns)
                                : strip_trailing_pronoun(current, pronouns);
            if (!stripped) throw NothingToStrip(e.id + ": no pronoun to strip in '" + current + "'");
            after = std::move(*stripped);
            break;
        }
        case EditReason::Manual:
            if (edit.before != current)
                throw Conflict(e.id + ": translation changed since it was read");
            after = unicode::normalize(edit.after);
            if (after.empty()) throw InvalidArgument("edit would leave an empty translation");
            if (after == current) throw InvalidArgument("edit changes nothing");
            break;
    }
    return project.commit(e.id, EditPayload{current, std::move(after), edit.kind}, actor).seq;
}

std::uint64_t review_accuracy(Project& project, std::string_view entry_id, Verdict verdict,
                              const std::string& actor,
                              std::optional<std::uint64_t> expected_revision) {
    if (verdict == Verdict::Repeated)
        throw InvalidArgument("repeated verdicts come from collapsing target duplicates");
    const std::string id(checked(project, entry_id, expected_revision).id);
    return project.commit(id, VerdictPayload{verdict}, actor).seq;
}

CollapsePlan plan_collapse(const Project& project) {
    std::map<std::string, const LexiconEntry*> accurate;
    std::map<std::string, std::vector<const LexiconEntry*>> pool;
    for (const auto& e : project.entries()) {
        if (e.state == State::ReviewedAccurate) {
            auto& slot = accurate[collapse_key(e)];
            if (!slot || better_representative(&e, slot)) slot = &e;
        } else if (in_review_pool(e)) {
            pool[collapse_key(e)].push_back(&e);
        }
    }

    CollapsePlan plan;
    for (auto& [key, members] : pool) {
        const LexiconEntry* rep = nullptr;
        if (auto it = accurate.find(key); it != accurate.end()) {
            rep = it->second;
        } else if (members.size() > 1) {
            rep = *std::min_element(members.begin(), members.end(), better_representative);
        }
        if (!rep) continue;
        for (const auto* m : members)
            if (m != rep) plan.emplace_back(m->id, rep->id);
    }
    std::sort(plan.begin(), plan.end());
    return plan;
}

std::size_t collapse_target_duplicates(Project& project, const std::string& actor) {
    const auto plan = plan_collapse(project);
    for (const auto& [id, rep] : plan) project.commit(id, VerdictPayload{Verdict::Repeated}, actor);
    return plan.size();
}

std::string_view to_string(QueueStage s) { return s == QueueStage::Triage ? "triage" : "review"; }

std::optional<QueueStage> parse_queue_stage(std::string_view s) {
    if (s == "triage") return QueueStage::Triage;
    if (s == "review") return QueueStage::Review;
    return std::nullopt;
}

bool ReviewQueue::admits(const LexiconEntry& e, QueueStage stage) {
    return stage == QueueStage::Triage ? e.state == State::Translated : in_review_pool(e);
}

ReviewQueue::ReviewQueue(const Project& project, QueueStage stage) : stage_(stage) {
    std::vector<const LexiconEntry*> pending;
    for (const auto& e : project.entries())
        if (admits(e, stage)) pending.push_back(&e);
    std::sort(pending.begin(), pending.end(), [](const LexiconEntry* a, const LexiconEntry* b) {
        if (a->tag != b->tag) return tag_code_less(a->tag, b->tag);
        if (a->frequency != b->frequency) return a->frequency > b->frequency;
        if (a->source_form != b->source_form) return a->source_form < b->source_form;
        return a->id < b->id;
    });
    ids_.reserve(pending.size());
    for (const auto* e : pending) ids_.push_back(e->id);
}

std::vector<std::string> ReviewQueue::next(std::size_t limit) {
    const std::size_t end = std::min(ids_.size(), cursor_ + limit);
    std::vector<std::string> out(ids_.begin() + static_cast<std::ptrdiff_t>(cursor_),
                                 ids_.begin() + static_cast<std::ptrdiff_t>(end));
    cursor_ = end;
    return out;
}

std::string_view to_string(ListName l) {
    switch (l) {
        case ListName::Correct: return "correct";
        case ListName::NotCorrect: return "not-correct";
        case ListName::Undecided: return "undecided";
        case ListName::Accurate: return "accurate";
        case ListName::Repeated: return "repeated";
        case ListName::Concerned: return "concerned";
    }
    return "correct";
}

std::optional<ListName> parse_list_name(std::string_view s) {
    for (auto l : kAllLists)
        if (to_string(l) == s) return l;
    return std::nullopt;
}

bool in_list(const LexiconEntry& e, ListName list) {
    switch (list) {
        case ListName::Correct: return was_correct(e);
        case ListName::NotCorrect: return e.state == State::LabeledNotCorrect;
        case ListName::Undecided: return e.state == State::LabeledUndecided;
        case ListName::Accurate: return e.state == State::ReviewedAccurate;
        case ListName::Repeated: return e.state == State::ReviewedRepeated;
        case ListName::Concerned: return e.state == State::ReviewedConcerned;
    }
    return false;
}

std::string export_list(const Project& project, ListName list) {
    std::ostringstream out;
    out << csv::format_row(
        {"id", "source_form", "tag", "frequency", "translation", "state", "ar_flag"});
    for (const auto& e : project.entries()) {
        if (!in_list(e, list)) continue;
        out << csv::format_row({e.id, e.source_form, e.tag, std::to_string(e.frequency),
                                e.translation.value_or(""), std::string(to_string(e.state)),
                                e.ar_flag ? "1" : "0"});
    }
    return out.str();
}

}  // namespace taglex
