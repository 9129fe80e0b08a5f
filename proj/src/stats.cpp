#include "taglex/stats.hpp"

#include "taglex/error.hpp"
#include "taglex/project.hpp"
#include "taglex/tagset.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace taglex {

std::string_view to_string(PercentileScheme s) {
    return s == PercentileScheme::MinRankOverN ? "rank/n" : "rank/(n+1)";
}

std::optional<PercentileScheme> parse_percentile_scheme(std::string_view s) {
    if (s == "rank/n" || s == "min-rank") return PercentileScheme::MinRankOverN;
    if (s == "rank/(n+1)" || s == "weibull") return PercentileScheme::MinRankOverNPlusOne;
    return std::nullopt;
}

const DistributionRow* TagDistribution::find(std::string_view code) const {
    for (const auto& r : rows)
        if (r.code == code) return &r;
    return nullptr;
}

std::string round_decimal(std::uint64_t num, std::uint64_t den, int places) {
    if (den == 0) throw InvalidArgument("zero denominator");
    std::uint64_t scale = 1;
    for (int i = 0; i < places; ++i) scale *= 10;
    // floor(num * scale / den + 1/2) in integers
    const auto scaled = static_cast<unsigned __int128>(num) * scale * 2 + den;
    const auto q = static_cast<std::uint64_t>(scaled / (static_cast<unsigned __int128>(den) * 2));
    if (places == 0) return std::to_string(q);
    std::string frac = std::to_string(q % scale);
    frac.insert(0, static_cast<std::size_t>(places) - frac.size(), '0');
    return std::to_string(q / scale) + "." + frac;
}

std::string round_one_significant(std::uint64_t num, std::uint64_t den) {
    if (den == 0 || num == 0) throw InvalidArgument("percentile must be in (0, 1]");
    if (num >= den) return "1";
    // Smallest k with num * 10^k >= den puts the leading digit at 10^-k.
    int k = 0;
    unsigned __int128 scaled = num;
    while (scaled < den) {
        scaled *= 10;
        ++k;
    }
    auto digit = static_cast<unsigned>((scaled * 2 + den) / (static_cast<unsigned __int128>(den) * 2));
    if (digit == 10) {
        digit = 1;
        --k;
    }
    if (k == 0) return "1";
    return "0." + std::string(static_cast<std::size_t>(k - 1), '0') + std::to_string(digit);
}

TagDistribution distribution(const std::vector<TagCount>& counts, PercentileScheme scheme) {
    TagDistribution dist;
    dist.scheme = scheme;

    std::set<std::string> seen;
    for (const auto& [code, n] : counts) {
        if (!seen.insert(code).second) throw InvalidArgument("tag listed twice: " + code);
        dist.total += n;
        if (n > 0) ++dist.tag_count;
    }
    if (dist.total == 0) throw EmptyDistribution();

    std::vector<std::uint64_t> ranked;
    for (const auto& [code, n] : counts)
        if (n > 0) ranked.push_back(n);
    std::sort(ranked.begin(), ranked.end());

    const std::uint64_t denom = scheme == PercentileScheme::MinRankOverN ? dist.tag_count
                                                                         : dist.tag_count + 1;
    for (const auto& [code, n] : counts) {
        DistributionRow row;
        row.code = code;
        row.count = n;
        row.percentage = static_cast<double>(n) / static_cast<double>(dist.total);
        row.percentage_display = round_decimal(n, dist.total, 4);
        if (n > 0) {
            const auto rank = static_cast<std::size_t>(
                std::lower_bound(ranked.begin(), ranked.end(), n) - ranked.begin() + 1);
            row.rank = rank;
            row.percentile = static_cast<double>(rank) / static_cast<double>(denom);
            row.percentile_display = round_one_significant(rank, denom);
        }
        dist.rows.push_back(std::move(row));
    }
    std::sort(dist.rows.begin(), dist.rows.end(), [](const auto& a, const auto& b) {
        return tag_code_less(a.code, b.code);
    });
    return dist;
}

TagDistribution distribution(const Project& project, PercentileScheme scheme) {
    std::map<std::string, std::uint64_t> by_tag;
    for (const auto& t : project.tagset().tags()) by_tag[t.code] = 0;
    for (const auto& e : project.entries())
        if (e.state == State::ReviewedAccurate) ++by_tag[e.tag];
    return distribution(std::vector<TagCount>(by_tag.begin(), by_tag.end()), scheme);
}

}  // namespace taglex
