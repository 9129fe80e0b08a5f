#pragma once

#include "taglex/stats.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace taglex {

class Project;

enum class ReportFormat { Csv, Json, SvgPie, SvgPercentileBars };

std::optional<ReportFormat> parse_report_format(std::string_view s);

struct ReportOptions {
    /// RFC-3339; only the JSON report carries it.
    std::string generated_at;
    std::vector<std::string> notes;
};

/// Deterministic for a given distribution and options.
///   Csv: `pos,count,percentage,percentage_display,rank,percentile,percentile_display`
///   Json: the same fields plus total and generated_at
///   SvgPie: one slice per ranked tag, angle proportional to count
///   SvgPercentileBars: one bar per ranked tag, height proportional to percentile
std::string emit_report(const TagDistribution& dist, ReportFormat format,
                        const ReportOptions& options = {});

struct StageOutput {
    std::string name;
    std::uint64_t count = 0;
    /// Size of the list before repeated entries were taken out, when it differs.
    std::optional<std::uint64_t> listed;
    std::string note;
};

struct StageRow {
    std::string stage;
    std::string input;
    std::uint64_t input_count = 0;
    std::vector<StageOutput> outputs;

    const StageOutput* output(std::string_view name) const;
};

struct PipelineSummary {
    std::vector<StageRow> rows;
    std::vector<std::string> notes;

    const StageRow* row(std::string_view stage) const;
};

inline constexpr std::string_view kStageDedup = "Remove duplicates";
inline constexpr std::string_view kStageCsv = "Convert to CSV";
inline constexpr std::string_view kStageTranslate = "Machine translation";
inline constexpr std::string_view kStageTriage = "Evaluate the translated output";
inline constexpr std::string_view kStageReview = "Evaluate the accuracy of tagging";

/// Per-stage input/output counts; stages not yet run are omitted.
PipelineSummary pipeline_summary(const Project& project, std::string_view corpus_name = "corpus");

std::string format_summary_table(const PipelineSummary& summary);
nlohmann::ordered_json summary_to_json(const PipelineSummary& summary);
nlohmann::ordered_json distribution_to_json(const TagDistribution& dist);

}  // namespace taglex
