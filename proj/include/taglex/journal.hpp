#pragma once

#include "taglex/event.hpp"
#include "taglex/project.hpp"

#include <cstdio>
#include <filesystem>
#include <istream>
#include <json.hpp>
#include <string>
#include <vector>

namespace taglex {

inline constexpr int kSnapshotVersion = 1;

nlohmann::ordered_json event_to_json(const ReviewEvent& ev);
/// Throws InvalidArgument on a malformed object.
ReviewEvent event_from_json(const nlohmann::json& j);

/// One JSON object per line, LF-terminated.
std::string format_journal_line(const ReviewEvent& ev);

/// Parses a JSON-lines journal. Sequence numbers must run 1, 2, 3, ...;
/// a gap or unparseable line raises CorruptJournal carrying the last good seq.
std::vector<ReviewEvent> read_journal(std::istream& in);

/// Folds events into `project`, skipping any at or below its last_seq.
/// Rule violations raise CorruptJournal.
void replay_onto(Project& project, const std::vector<ReviewEvent>& events);

/// Folds `events` into an empty project.
Project journal_replay(const std::vector<ReviewEvent>& events, std::string name, TagSet tagset,
                       Clock clock = system_clock());

/// Versioned JSON of the full project state (entries + last_seq, no journal).
std::string snapshot(const Project& project);
Project load_snapshot(std::istream& in, Clock clock = system_clock());

/// Append-only journal file. Each append() writes whole lines and syncs.
class JournalWriter {
public:
    explicit JournalWriter(const std::filesystem::path& path);
    ~JournalWriter();
    JournalWriter(const JournalWriter&) = delete;
    JournalWriter& operator=(const JournalWriter&) = delete;

    void append(const std::vector<ReviewEvent>& events);

private:
    std::FILE* file_ = nullptr;
    std::filesystem::path path_;
};

/// Drops an incomplete final line left by a crash mid-append. Returns the
/// number of bytes removed.
std::size_t repair_torn_tail(const std::filesystem::path& journal_path);

}  // namespace taglex
