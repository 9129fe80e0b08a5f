#pragma once

#include "taglex/entry.hpp"
#include "taglex/project.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace taglex {

// Human-in-the-loop operations. Each commits one or more events to the
// project and returns the seq of the last event it appended. The optional
// `expected_revision` is the entry revision the caller last saw; a mismatch
// raises Conflict before anything is written.

/// Translated -> Labeled(label). A Correct label whose source form repeats an
/// earlier Correct entry (same tag, same loose key) also commits a
/// Flag(source-repeat) that takes the entry out of the review pool.
std::uint64_t label(Project& project, std::string_view entry_id, Label label,
                    const std::string& actor,
                    std::optional<std::uint64_t> expected_revision = std::nullopt);

/// Compensating event: Labeled(*) -> Translated.
std::uint64_t unlabel(Project& project, std::string_view entry_id, const std::string& actor,
                      std::optional<std::uint64_t> expected_revision = std::nullopt);

/// Sets ar_flag on an AR-tagged entry; already flagged is a no-op (nullopt).
std::optional<std::uint64_t> flag_ar(Project& project, std::string_view entry_id,
                                     const std::string& actor);

struct PronounList {
    std::vector<std::string> tokens = {"من", "تۆ"};
};

struct TrivialEdit {
    EditReason kind = EditReason::Manual;
    std::string before;  // Manual only
    std::string after;   // Manual only

    static TrivialEdit strip_leading() { return {EditReason::StripLeadingPronoun, {}, {}}; }
    static TrivialEdit strip_trailing() { return {EditReason::StripTrailingPronoun, {}, {}}; }
    static TrivialEdit manual(std::string before, std::string after) {
        return {EditReason::Manual, std::move(before), std::move(after)};
    }
};

/// Result of removing one standalone pronoun token (followed/preceded by
/// whitespace) from the start or end of `translation`, or nullopt.
std::optional<std::string> strip_leading_pronoun(std::string_view translation,
                                                 const PronounList& pronouns = {});
std::optional<std::string> strip_trailing_pronoun(std::string_view translation,
                                                  const PronounList& pronouns = {});

/// Rewrites the translation of a Translated or Labeled(Correct) entry. Strip
/// edits remove one pronoun per call and raise NothingToStrip once none is
/// left. Manual edits require `before` to match the current translation.
std::uint64_t trivial_edit(Project& project, std::string_view entry_id, const TrivialEdit& edit,
                           const std::string& actor, const PronounList& pronouns = {},
                           std::optional<std::uint64_t> expected_revision = std::nullopt);

/// Labeled(Correct) -> Reviewed(Accurate | Concerned).
std::uint64_t review_accuracy(Project& project, std::string_view entry_id, Verdict verdict,
                              const std::string& actor,
                              std::optional<std::uint64_t> expected_revision = std::nullopt);

/// (entry to mark Repeated, representative it duplicates)
using CollapsePlan = std::vector<std::pair<std::string, std::string>>;

/// Groups review-pool entries by (normalize(translation), tag). In each group
/// the representative is an entry of that key already Reviewed(Accurate) if
/// one exists, else the pool member with the highest frequency, ties broken
/// by the smallest source_form. Every other pool member is planned Repeated.
/// The plan is sorted by entry id.
CollapsePlan plan_collapse(const Project& project);

/// Applies plan_collapse(). Idempotent. Returns the number marked Repeated.
std::size_t collapse_target_duplicates(Project& project, const std::string& actor);

enum class QueueStage { Triage, Review };

std::string_view to_string(QueueStage s);
std::optional<QueueStage> parse_queue_stage(std::string_view s);

/// Entries awaiting a stage's decision, ordered by tag (report order), then
/// frequency descending, then source form.
class ReviewQueue {
public:
    ReviewQueue(const Project& project, QueueStage stage);

    QueueStage stage() const noexcept { return stage_; }
    const std::vector<std::string>& ids() const noexcept { return ids_; }
    std::size_t size() const noexcept { return ids_.size(); }
    std::size_t cursor() const noexcept { return cursor_; }

    /// Up to `limit` ids from the cursor, advancing it.
    std::vector<std::string> next(std::size_t limit);

    static bool admits(const LexiconEntry& e, QueueStage stage);

private:
    QueueStage stage_;
    std::vector<std::string> ids_;
    std::size_t cursor_ = 0;
};

enum class ListName { Correct, NotCorrect, Undecided, Accurate, Repeated, Concerned };

inline constexpr ListName kAllLists[] = {ListName::Correct,  ListName::NotCorrect,
                                         ListName::Undecided, ListName::Accurate,
                                         ListName::Repeated, ListName::Concerned};

/// "correct", "not-correct", ... (file stem of the export)
std::string_view to_string(ListName l);
std::optional<ListName> parse_list_name(std::string_view s);

/// Whether `e` belongs to a triage or review list. The correct list holds
/// every entry labeled Correct (including those reviewed since) except
/// repeated source entries.
bool in_list(const LexiconEntry& e, ListName list);

/// CSV `id,source_form,tag,frequency,translation,state,ar_flag` in project order.
std::string export_list(const Project& project, ListName list);

}  // namespace taglex
