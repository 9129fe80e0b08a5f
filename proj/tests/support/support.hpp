#pragma once

#include "taglex/csv.hpp"
#include "taglex/entry.hpp"
#include "taglex/project.hpp"
#include "taglex/stats.hpp"
#include "taglex/timestamp.hpp"

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace taglex::testing {

struct PublishedRow {
    std::string code;
    std::uint64_t count;
    std::string percentage;
    std::string percentile;
};

/// The 37 rows of the published tag distribution table, in printed order.
const std::vector<PublishedRow>& published_table();
std::vector<TagCount> published_counts();

/// Deterministic clock: 2026-01-01T00:00:00Z, advancing 1 ms per call.
Clock counting_clock();

/// Removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& label);
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const noexcept { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

std::filesystem::path resource_dir();
std::filesystem::path cli_binary();

/// Random string over Perso-Arabic letters, the mapped Arabic code points,
/// both digit blocks, ZWNJ, harakat, tatweel, assorted whitespace and ASCII.
std::string fuzz_perso_string(std::mt19937_64& rng, std::size_t max_len);

/// Random surface forms built from Perso-Arabic letters only (no spaces).
std::string random_word(std::mt19937_64& rng, std::size_t min_len, std::size_t max_len);

/// A project of `n` distinct entries already in state Translated. Target
/// forms are drawn from a pool of `target_pool` words so that repeated
/// translations occur. About one tag in twelve is AR.
Project random_translated_project(std::mt19937_64& rng, std::size_t n, std::size_t target_pool);

/// Labels every Translated entry at random (flagging AR entries), collapses
/// repeated targets and gives every remaining review-pool entry a random
/// verdict, with occasional pronoun edits along the way.
void drive_to_completion(Project& project, std::mt19937_64& rng);

/// Applies `steps` random operations (label, unlabel, edit, verdict,
/// flag-ar, collapse), legal or not; rejected ones must leave no trace.
void random_session(Project& project, std::mt19937_64& rng, std::size_t steps);

/// Pairwise reference for the repeated-target collapse: for every
/// review-pool entry with a same-tag, same-target partner, the id of the
/// partner that should be kept (sorted by entry id).
std::vector<std::pair<std::string, std::string>> brute_force_collapse(const Project& project);

/// Every record of a CSV document.
std::vector<csv::Row> read_csv(const std::string& text);

}  // namespace taglex::testing
