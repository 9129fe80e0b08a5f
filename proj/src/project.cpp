#include "taglex/project.hpp"

#include "taglex/error.hpp"
#include "taglex/unicode.hpp"

#include <fmt/format.h>

namespace taglex {

Project::Project(std::string name, TagSet tagset, Clock clock)
    : name_(std::move(name)), tagset_(std::move(tagset)), clock_(std::move(clock)) {}

Project Project::restore(std::string name, TagSet tagset, std::vector<LexiconEntry> entries,
                         std::uint64_t last_seq, Clock clock) {
    Project p(std::move(name), std::move(tagset), std::move(clock));
    for (auto& e : entries) {
        if (!p.tagset_.contains(e.tag)) throw InvalidArgument("snapshot tag not in tagset: " + e.tag);
        if (e.revision > last_seq) throw InvalidArgument("snapshot entry revision beyond last seq");
        p.insert(std::move(e));
    }
    p.last_seq_ = last_seq;
    return p;
}

const LexiconEntry* Project::find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    return it == index_.end() ? nullptr : &entries_[it->second];
}

const LexiconEntry& Project::at(std::string_view id) const {
    const auto* e = find(id);
    if (!e) throw UnknownEntry(std::string(id));
    return *e;
}

std::size_t Project::count(Stage s) const {
    std::size_t n = 0;
    for (State st : kAllStates)
        if (stage_of(st) == s) n += count(st);
    return n;
}

std::string Project::loose_index_key(const LexiconEntry& e) {
    return e.tag + '\x1f' + unicode::loose_key(e.source_form);
}

std::vector<const LexiconEntry*> Project::loose_source_group(const LexiconEntry& e) const {
    std::vector<const LexiconEntry*> out;
    auto it = loose_index_.find(loose_index_key(e));
    if (it == loose_index_.end()) return out;
    for (std::size_t i : it->second) out.push_back(&entries_[i]);
    return out;
}

const ReviewEvent& Project::commit(std::string entry_id, EventPayload payload, std::string actor) {
    ReviewEvent ev;
    ev.seq = last_seq_ + 1;
    ev.entry_id = std::move(entry_id);
    ev.payload = std::move(payload);
    ev.actor = std::move(actor);
    ev.ts = clock_();
    apply(ev);
    return journal_.back();
}

void Project::apply(const ReviewEvent& event) {
    if (event.seq != last_seq_ + 1)
        throw InvalidArgument(
            fmt::format("event seq {} does not follow {}", event.seq, last_seq_));
    if (event.actor.empty()) throw InvalidArgument("event has no actor");

    if (event.kind() == EventKind::Create) {
        LexiconEntry e = make_entry(event);
        if (!tagset_.contains(e.tag)) throw InvalidArgument("tag not in tagset: " + e.tag);
        if (index_.count(e.id))
            throw IllegalTransition(fmt::format("{}: entry already exists", e.id));
        insert(std::move(e));
    } else {
        auto it = index_.find(event.entry_id);
        if (it == index_.end()) throw UnknownEntry(event.entry_id);
        replace(it->second, transition(entries_[it->second], event));
    }
    journal_.push_back(event);
    last_seq_ = event.seq;
}

void Project::insert(LexiconEntry entry) {
    const std::size_t i = entries_.size();
    if (!index_.emplace(entry.id, i).second)
        throw InvalidArgument("duplicate entry id " + entry.id);
    loose_index_[loose_index_key(entry)].push_back(i);
    ++counters_[static_cast<std::size_t>(entry.state)];
    ar_count_ += entry.ar_flag;
    source_repeat_count_ += entry.source_repeat;
    entries_.push_back(std::move(entry));
}

void Project::replace(std::size_t index, LexiconEntry next) {
    auto& cur = entries_[index];
    --counters_[static_cast<std::size_t>(cur.state)];
    ++counters_[static_cast<std::size_t>(next.state)];
    ar_count_ = ar_count_ - cur.ar_flag + next.ar_flag;
    source_repeat_count_ = source_repeat_count_ - cur.source_repeat + next.source_repeat;
    cur = std::move(next);
}

std::array<std::size_t, kStateCount> Project::recount() const {
    std::array<std::size_t, kStateCount> out{};
    for (const auto& e : entries_) ++out[static_cast<std::size_t>(e.state)];
    return out;
}

}  // namespace taglex
