#include "taglex/store.hpp"

#include "taglex/error.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace taglex {

namespace {

nlohmann::ordered_json meta_to_json(const ProjectMeta& m) {
    return {{"format", "taglex-project"},
            {"version", 1},
            {"name", m.name},
            {"corpus", m.corpus},
            {"accepted_tokens", m.accepted_tokens},
            {"quarantined", m.quarantined}};
}

ProjectMeta meta_from_json(const nlohmann::json& j) {
    ProjectMeta m;
    m.name = j.at("name").get<std::string>();
    m.corpus = j.value("corpus", std::string());
    m.accepted_tokens = j.value("accepted_tokens", std::uint64_t{0});
    m.quarantined = j.value("quarantined", std::uint64_t{0});
    return m;
}

}  // namespace

void write_file_atomic(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw IoError("write failed on " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw IoError("cannot replace " + path.string() + ": " + ec.message());
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool ProjectStore::exists(const fs::path& dir) { return fs::exists(dir / kMetaFile); }

ProjectStore::ProjectStore(fs::path dir, ProjectMeta meta, Project project)
    : dir_(std::move(dir)),
      meta_(std::move(meta)),
      project_(std::move(project)),
      writer_(dir_ / kJournalFile) {}

std::unique_ptr<ProjectStore> ProjectStore::create(const fs::path& dir, ProjectMeta meta,
                                                   const TagSet& tagset, Clock clock) {
    if (exists(dir)) throw StageError("project already exists at " + dir.string());
    fs::create_directories(dir / "exports");
    write_file_atomic(dir / kTagsetFile, tagset.to_json().dump(2) + '\n');
    write_file_atomic(dir / kMetaFile, meta_to_json(meta).dump(2) + '\n');
    Project project(meta.name, tagset, std::move(clock));
    return std::unique_ptr<ProjectStore>(new ProjectStore(dir, std::move(meta), std::move(project)));
}

std::unique_ptr<ProjectStore> ProjectStore::open(const fs::path& dir, Clock clock) {
    if (!exists(dir)) throw StageError("no project at " + dir.string() + " (run ingest first)");

    ProjectMeta meta;
    TagSet tagset;
    try {
        meta = meta_from_json(nlohmann::json::parse(read_file(dir / kMetaFile)));
        tagset = TagSet::from_json(nlohmann::json::parse(read_file(dir / kTagsetFile)));
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("unreadable project metadata: ") + e.what());
    }

    const fs::path journal_path = dir / kJournalFile;
    std::vector<ReviewEvent> events;
    if (fs::exists(journal_path)) {
        repair_torn_tail(journal_path);
        std::ifstream in(journal_path, std::ios::binary);
        events = read_journal(in);
    }

    std::optional<Project> project;
    if (fs::exists(dir / kSnapshotFile)) {
        std::ifstream in(dir / kSnapshotFile, std::ios::binary);
        project.emplace(load_snapshot(in, clock));
        const std::uint64_t journal_last = events.empty() ? 0 : events.back().seq;
        if (project->last_seq() > journal_last)
            throw CorruptJournal(journal_last, "snapshot is ahead of the journal");
    } else {
        project.emplace(meta.name, tagset, clock);
    }
    replay_onto(*project, events);
    return std::unique_ptr<ProjectStore>(new ProjectStore(dir, std::move(meta), std::move(*project)));
}

ProjectMeta ProjectStore::meta() const {
    std::shared_lock lock(mu_);
    return meta_;
}

void ProjectStore::set_meta(ProjectMeta meta) {
    std::unique_lock lock(mu_);
    write_file_atomic(dir_ / kMetaFile, meta_to_json(meta).dump(2) + '\n');
    meta_ = std::move(meta);
}

void ProjectStore::write_snapshot() const {
    std::shared_lock lock(mu_);
    write_file_atomic(dir_ / kSnapshotFile, snapshot(project_));
}

void ProjectStore::persist_from(std::size_t first_new) {
    const auto& journal = project_.journal();
    if (first_new >= journal.size()) return;
    writer_.append(std::vector<ReviewEvent>(journal.begin() + static_cast<std::ptrdiff_t>(first_new),
                                            journal.end()));
}

}  // namespace taglex
