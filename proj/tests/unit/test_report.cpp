#include "support.hpp"
#include "taglex/csv.hpp"
#include "taglex/review.hpp"
#include "taglex/report.hpp"

#include <doctest.h>

#include <regex>
#include <sstream>

using namespace taglex;

namespace {

std::vector<std::pair<std::string, double>> slice_sweeps(const std::string& svg) {
    std::vector<std::pair<std::string, double>> out;
    const std::regex re(R"re(data-tag="([^"]+)" data-start="[0-9.]+" data-sweep="([0-9.]+)")re");
    for (std::sregex_iterator it(svg.begin(), svg.end(), re), end; it != end; ++it)
        out.emplace_back((*it)[1].str(), std::stod((*it)[2].str()));
    return out;
}

Project with_entries(const std::vector<std::pair<std::string, std::string>>& items) {
    Project p("toy", default_tagset(), testing::counting_clock());
    for (const auto& [src, tag] : items) p.commit(entry_id(src, tag), CreatePayload{src, tag, 2}, "t");
    return p;
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("pie slice angles follow the counts") {
    const auto d = distribution({{"N_SING", 3}, {"V_PA", 1}});
    const auto slices = slice_sweeps(emit_report(d, ReportFormat::SvgPie));
    REQUIRE(slices.size() == 2);
    CHECK(slices[0].first == "N_SING");
    CHECK(std::abs(slices[0].second - 270.0) < 0.1);
    CHECK(std::abs(slices[1].second - 90.0) < 0.1);
}

TEST_CASE("pie of the published counts covers the circle") {
    const auto d = distribution(testing::published_counts());
    const auto slices = slice_sweeps(emit_report(d, ReportFormat::SvgPie));
    REQUIRE(slices.size() == 37);
    double total = 0;
    for (std::size_t i = 0; i < slices.size(); ++i) {
        total += slices[i].second;
        CHECK(std::abs(slices[i].second - 360.0 * testing::published_table()[i].count / 13385.0) < 0.1);
    }
    CHECK(std::abs(total - 360.0) < 0.1);
}

TEST_CASE("single tag pie is a full circle") {
    const auto svg = emit_report(distribution({{"N_SING", 4}}), ReportFormat::SvgPie);
    CHECK(svg.find("<circle") != std::string::npos);
}

TEST_CASE("percentile bars skip unranked tags") {
    const auto svg = emit_report(distribution({{"A", 0}, {"B", 2}, {"C", 1}}), ReportFormat::SvgPercentileBars);
    CHECK(svg.find("data-tag=\"A\"") == std::string::npos);
    CHECK(svg.find("data-tag=\"B\" data-percentile=\"1.000000\"") != std::string::npos);
    CHECK(svg.find("data-tag=\"C\" data-percentile=\"0.500000\"") != std::string::npos);
}

TEST_CASE("csv report has one row per tag") {
    const auto d = distribution(testing::published_counts());
    const auto rows = testing::read_csv(emit_report(d, ReportFormat::Csv));
    REQUIRE(rows.size() == 38);
    CHECK(rows[0] == std::vector<std::string>{"pos", "count", "percentage", "percentage_display", "rank",
                                              "percentile", "percentile_display"});
    CHECK(rows[1][0] == "ADJ");
    CHECK(rows[22][0] == "N_SING");
    CHECK(rows[22][3] == "0.5228");
}

TEST_CASE("json report carries the options") {
    const auto d = distribution({{"A", 1}, {"B", 0}});
    const auto j = nlohmann::json::parse(
        emit_report(d, ReportFormat::Json, {"2026-01-01T00:00:00Z", {"n1"}}));
    CHECK(j["total"] == 1);
    CHECK(j["generated_at"] == "2026-01-01T00:00:00Z");
    CHECK(j["notes"][0] == "n1");
    CHECK(j["rows"][1]["rank"].is_null());
}

TEST_CASE("reports are deterministic") {
    const auto d = distribution(testing::published_counts());
    for (auto f : {ReportFormat::Csv, ReportFormat::Json, ReportFormat::SvgPie, ReportFormat::SvgPercentileBars})
        CHECK(emit_report(d, f, {"t", {}}) == emit_report(distribution(testing::published_counts()), f, {"t", {}}));
}

TEST_CASE("summary after ingest only shows the ingest stages") {
    auto p = with_entries({{"کتاب", "N_SING"}, {"رفت", "V_PA"}});
    const auto s = pipeline_summary(p, "corpus.txt");
    REQUIRE(s.rows.size() == 2);
    CHECK(s.rows[0].stage == kStageDedup);
    CHECK(s.rows[0].input == "corpus.txt");
    CHECK(s.rows[0].input_count == 4);
    CHECK(s.rows[0].outputs[0].count == 2);
    CHECK(s.rows[1].stage == kStageCsv);
    CHECK(pipeline_summary(Project("e", default_tagset())).rows.empty());
}

TEST_CASE("summary of a finished run shows both partitions") {
    auto p = with_entries({{"خانه", "N_SING"},
                           {"منزل", "N_SING"},
                           {"رفت", "V_PA"},
                           {"آمد", "V_PA"},
                           {"بد", "ADJ_SIM"},
                           {"می‌روم", "V_PRS"},
                           {"میروم", "V_PRS"},
                           {"الخ", "AR"}});
    const std::map<std::string, std::string> mt = {{"خانه", "ماڵ"}, {"منزل", "ماڵ"}, {"رفت", "ڕۆیشت"},
                                                   {"آمد", "هات"},  {"بد", "خراپ"},  {"می‌روم", "دەچم"},
                                                   {"میروم", "دەچم"}, {"الخ", "هتد"}};
    for (const auto& e : std::vector<LexiconEntry>(p.entries()))
        p.commit(e.id, TranslatePayload{mt.at(e.source_form)}, "t");
    for (const auto& src : {"خانه", "منزل", "رفت", "آمد", "می‌روم"})
        for (const auto& e : p.entries())
            if (e.source_form == src) label(p, e.id, Label::Correct, "t");
    label(p, entry_id("بد", "ADJ_SIM"), Label::NotCorrect, "t");
    label(p, entry_id("میروم", "V_PRS"), Label::Correct, "t");  // repeats می‌روم
    label(p, entry_id("الخ", "AR"), Label::Undecided, "t");
    flag_ar(p, entry_id("الخ", "AR"), "t");
    CHECK(collapse_target_duplicates(p, "t") == 1);
    review_accuracy(p, entry_id("خانه", "N_SING"), Verdict::Accurate, "r");
    review_accuracy(p, entry_id("رفت", "V_PA"), Verdict::Accurate, "r");
    review_accuracy(p, entry_id("آمد", "V_PA"), Verdict::Concerned, "r");
    review_accuracy(p, entry_id("می‌روم", "V_PRS"), Verdict::Accurate, "r");

    const auto s = pipeline_summary(p, "corpus.txt");
    REQUIRE(s.rows.size() == 5);
    const auto* triage = s.row(kStageTriage);
    REQUIRE(triage);
    CHECK(triage->input_count == 8);
    CHECK(triage->output("Correct")->count == 5);
    CHECK(triage->output("Correct")->listed == 6u);
    CHECK(triage->output("Correct")->note.find("1 repeated source entries") != std::string::npos);
    CHECK(triage->output("Not-correct")->count == 1);
    CHECK(triage->output("Undecided")->count == 1);
    CHECK(triage->output("AR-tagged")->count == 1);

    const auto* review = s.row(kStageReview);
    REQUIRE(review);
    CHECK(review->input_count == 5);
    CHECK(review->output("Accurate")->count == 3);
    CHECK(review->output("Repeated")->count == 1);
    CHECK(review->output("Concerned")->count == 1);
    CHECK(review->input_count == review->output("Accurate")->count + review->output("Repeated")->count +
                                     review->output("Concerned")->count);

    const std::string table = format_summary_table(s);
    CHECK(table.find("[1] The list had 6 entries; 1 repeated source entries removed.") != std::string::npos);
    const auto j = summary_to_json(s);
    CHECK(j["rows"].size() == 5);
}

}  // TEST_SUITE
