#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace taglex {

class Project;

/// How a tag's min-rank becomes a percentile.
enum class PercentileScheme {
    /// rank / N over the N tags with a nonzero count. Range (0, 1].
    MinRankOverN,
    /// rank / (N + 1), the Weibull plotting position. Range (0, 1).
    MinRankOverNPlusOne,
};

std::string_view to_string(PercentileScheme s);
std::optional<PercentileScheme> parse_percentile_scheme(std::string_view s);

struct DistributionRow {
    std::string code;
    std::uint64_t count = 0;
    double percentage = 0.0;
    std::string percentage_display;
    /// Absent for zero-count rows, which are excluded from ranking.
    std::optional<std::size_t> rank;
    std::optional<double> percentile;
    std::string percentile_display;
};

struct TagDistribution {
    std::vector<DistributionRow> rows;
    std::uint64_t total = 0;
    std::size_t tag_count = 0;
    PercentileScheme scheme = PercentileScheme::MinRankOverN;

    const DistributionRow* find(std::string_view code) const;
};

using TagCount = std::pair<std::string, std::uint64_t>;

/// Rows sorted by tag code (report order), percentage = count / total,
/// rank = 1-based ascending min-rank among nonzero counts.
/// Throws EmptyDistribution if every count is zero, InvalidArgument on a
/// repeated code.
TagDistribution distribution(const std::vector<TagCount>& counts,
                             PercentileScheme scheme = PercentileScheme::MinRankOverN);

/// Distribution of Reviewed(Accurate) entries over every tag in the
/// project's tagset (zero-count tags included as unranked rows).
TagDistribution distribution(const Project& project,
                             PercentileScheme scheme = PercentileScheme::MinRankOverN);

/// num/den rounded half-up to `places` decimals, e.g. (6998, 13385, 4) -> "0.5228".
std::string round_decimal(std::uint64_t num, std::uint64_t den, int places);

/// num/den (in (0, 1]) rounded half-up to one significant figure:
/// (1, 37) -> "0.03", (28, 37) -> "0.8", (37, 37) -> "1".
std::string round_one_significant(std::uint64_t num, std::uint64_t den);

}  // namespace taglex
