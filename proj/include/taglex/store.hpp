#pragma once

#include "taglex/journal.hpp"
#include "taglex/project.hpp"
#include "taglex/tagset.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <type_traits>

namespace taglex {

/// Facts about the ingest that the journal does not carry.
struct ProjectMeta {
    std::string name;
    std::string corpus;
    std::uint64_t accepted_tokens = 0;
    std::uint64_t quarantined = 0;
};

/// A project directory: the single root for journal, snapshot, tagset,
/// translation cache and exports.
///
///   project.json  tagset.json  journal.jsonl  snapshot.json  exports/
///
/// All journal appends go through mutate(), the one serialized commit point;
/// read() gives concurrent readers a consistent view.
class ProjectStore {
public:
    static constexpr const char* kMetaFile = "project.json";
    static constexpr const char* kTagsetFile = "tagset.json";
    static constexpr const char* kJournalFile = "journal.jsonl";
    static constexpr const char* kSnapshotFile = "snapshot.json";

    static bool exists(const std::filesystem::path& dir);

    /// Creates the directory layout. Throws StageError if a project exists.
    static std::unique_ptr<ProjectStore> create(const std::filesystem::path& dir, ProjectMeta meta,
                                                const TagSet& tagset, Clock clock = system_clock());

    /// Loads snapshot.json (if any) and replays the journal tail.
    /// Throws StageError if `dir` holds no project.
    static std::unique_ptr<ProjectStore> open(const std::filesystem::path& dir,
                                              Clock clock = system_clock());

    const std::filesystem::path& dir() const noexcept { return dir_; }
    std::filesystem::path exports_dir() const { return dir_ / "exports"; }

    ProjectMeta meta() const;
    void set_meta(ProjectMeta meta);

    /// Runs `fn(Project&)` under the writer lock, then appends every event it
    /// committed to the journal file (also when `fn` throws part way).
    template <typename Fn>
    auto mutate(Fn&& fn) {
        std::unique_lock lock(mu_);
        const std::size_t before = project_.journal().size();
        try {
            if constexpr (std::is_void_v<std::invoke_result_t<Fn, Project&>>) {
                fn(project_);
                persist_from(before);
            } else {
                auto result = fn(project_);
                persist_from(before);
                return result;
            }
        } catch (...) {
            persist_from(before);
            throw;
        }
    }

    template <typename Fn>
    auto read(Fn&& fn) const {
        std::shared_lock lock(mu_);
        return fn(static_cast<const Project&>(project_));
    }

    /// Writes snapshot.json atomically (temp file + rename).
    void write_snapshot() const;

private:
    ProjectStore(std::filesystem::path dir, ProjectMeta meta, Project project);
    void persist_from(std::size_t first_new);

    std::filesystem::path dir_;
    mutable std::shared_mutex mu_;
    ProjectMeta meta_;
    Project project_;
    JournalWriter writer_;
};

/// Writes `content` to `path` via a temp file and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

}  // namespace taglex
