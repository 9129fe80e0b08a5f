#pragma once

#include "taglex/entry.hpp"
#include "taglex/event.hpp"
#include "taglex/tagset.hpp"
#include "taglex/timestamp.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace taglex {

/// In-memory lexicon project: entries in creation order plus the events
/// applied since the project's base (empty project or a loaded snapshot).
///
/// Every mutation goes through apply()/commit(), which validate the event
/// with transition() before touching any state, so a throwing call leaves
/// the project unchanged. Not thread-safe; ProjectStore serializes writers.
class Project {
public:
    Project(std::string name, TagSet tagset, Clock clock = system_clock());

    /// Rebuilds a project from snapshot state (no journal tail).
    static Project restore(std::string name, TagSet tagset, std::vector<LexiconEntry> entries,
                           std::uint64_t last_seq, Clock clock = system_clock());

    const std::string& name() const noexcept { return name_; }
    const TagSet& tagset() const noexcept { return tagset_; }
    const std::vector<LexiconEntry>& entries() const noexcept { return entries_; }
    const std::vector<ReviewEvent>& journal() const noexcept { return journal_; }
    std::uint64_t last_seq() const noexcept { return last_seq_; }
    std::size_t size() const noexcept { return entries_.size(); }

    const LexiconEntry* find(std::string_view id) const;
    /// Throws UnknownEntry.
    const LexiconEntry& at(std::string_view id) const;

    std::size_t count(State s) const { return counters_[static_cast<std::size_t>(s)]; }
    std::size_t count(Stage s) const;
    std::size_t ar_count() const noexcept { return ar_count_; }
    std::size_t source_repeat_count() const noexcept { return source_repeat_count_; }

    /// Entries sharing tag and unicode::loose_key() of the source form.
    std::vector<const LexiconEntry*> loose_source_group(const LexiconEntry& e) const;

    /// Stamps a new event with the next seq and the clock, then applies it.
    const ReviewEvent& commit(std::string entry_id, EventPayload payload, std::string actor);

    /// Applies an already sequenced event; its seq must be last_seq() + 1.
    void apply(const ReviewEvent& event);

    Timestamp now() const { return clock_(); }
    void set_clock(Clock clock) { clock_ = std::move(clock); }

    /// Recount of per-state totals straight from the entries.
    std::array<std::size_t, kStateCount> recount() const;

private:
    void insert(LexiconEntry entry);
    void replace(std::size_t index, LexiconEntry next);
    static std::string loose_index_key(const LexiconEntry& e);

    std::string name_;
    TagSet tagset_;
    Clock clock_;
    std::vector<LexiconEntry> entries_;
    std::unordered_map<std::string, std::size_t> index_;
    std::unordered_map<std::string, std::vector<std::size_t>> loose_index_;
    std::vector<ReviewEvent> journal_;
    std::uint64_t last_seq_ = 0;
    std::array<std::size_t, kStateCount> counters_{};
    std::size_t ar_count_ = 0;
    std::size_t source_repeat_count_ = 0;
};

}  // namespace taglex
