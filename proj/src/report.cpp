#include "taglex/report.hpp"

#include "taglex/csv.hpp"
#include "taglex/project.hpp"

#include <fmt/format.h>

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace taglex {

using ojson = nlohmann::ordered_json;

std::optional<ReportFormat> parse_report_format(std::string_view s) {
    if (s == "csv") return ReportFormat::Csv;
    if (s == "json") return ReportFormat::Json;
    if (s == "svg-pie" || s == "pie") return ReportFormat::SvgPie;
    if (s == "svg-percentile" || s == "percentile") return ReportFormat::SvgPercentileBars;
    return std::nullopt;
}

namespace {

constexpr std::array<const char*, 12> kPalette = {
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948",
    "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac", "#1f77b4", "#8c564b"};

std::string num(double v) { return fmt::format("{:.4f}", v); }

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string emit_csv(const TagDistribution& dist) {
    std::ostringstream out;
    out << csv::format_row({"pos", "count", "percentage", "percentage_display", "rank", "percentile",
                            "percentile_display"});
    for (const auto& r : dist.rows) {
        out << csv::format_row({r.code, std::to_string(r.count), fmt::format("{}", r.percentage),
                                r.percentage_display, r.rank ? std::to_string(*r.rank) : "",
                                r.percentile ? fmt::format("{}", *r.percentile) : "",
                                r.percentile_display});
    }
    return out.str();
}

std::string emit_pie(const TagDistribution& dist) {
    constexpr double cx = 240, cy = 240, radius = 200;
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"480\" "
           "viewBox=\"0 0 720 480\" font-family=\"sans-serif\" font-size=\"11\">\n";
    out << "<title>POS tag magnitude</title>\n";

    auto point = [&](double deg) {
        const double rad = deg * std::numbers::pi / 180.0;
        return std::pair{cx + radius * std::sin(rad), cy - radius * std::cos(rad)};
    };

    std::uint64_t cum = 0;
    std::size_t slice = 0;
    for (const auto& r : dist.rows) {
        if (r.count == 0) continue;
        const double start = 360.0 * static_cast<double>(cum) / static_cast<double>(dist.total);
        cum += r.count;
        const double end = 360.0 * static_cast<double>(cum) / static_cast<double>(dist.total);
        const double sweep = end - start;
        const char* color = kPalette[slice % kPalette.size()];
        out << "<g class=\"slice\" data-tag=\"" << xml_escape(r.code) << "\" data-start=\""
            << num(start) << "\" data-sweep=\"" << num(sweep) << "\">";
        if (r.count == dist.total) {
            out << "<circle cx=\"" << num(cx) << "\" cy=\"" << num(cy) << "\" r=\"" << num(radius)
                << "\" fill=\"" << color << "\"/>";
        } else {
            const auto [x1, y1] = point(start);
            const auto [x2, y2] = point(end);
            out << "<path d=\"M " << num(cx) << ' ' << num(cy) << " L " << num(x1) << ' ' << num(y1)
                << " A " << num(radius) << ' ' << num(radius) << " 0 " << (sweep > 180.0 ? 1 : 0)
                << " 1 " << num(x2) << ' ' << num(y2) << " Z\" fill=\"" << color
                << "\" stroke=\"#ffffff\" stroke-width=\"0.5\"/>";
        }
        out << "<title>" << xml_escape(r.code) << ' ' << r.count << " (" << r.percentage_display
            << ")</title></g>\n";

        const double ly = 20.0 + 12.0 * static_cast<double>(slice);
        out << "<rect x=\"480\" y=\"" << num(ly - 9) << "\" width=\"10\" height=\"10\" fill=\""
            << color << "\"/><text x=\"495\" y=\"" << num(ly) << "\">" << xml_escape(r.code) << ' '
            << r.percentage_display << "</text>\n";
        ++slice;
    }
    out << "</svg>\n";
    return out.str();
}

std::string emit_percentile_bars(const TagDistribution& dist) {
    std::size_t bars = 0;
    for (const auto& r : dist.rows) bars += r.rank.has_value();

    constexpr double left = 40, top = 20, plot_h = 300, bar_w = 14, gap = 6;
    const double width = left + static_cast<double>(bars) * (bar_w + gap) + 20;
    const double base = top + plot_h;

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width)
        << "\" height=\"420\" viewBox=\"0 0 " << num(width)
        << " 420\" font-family=\"sans-serif\" font-size=\"10\">\n";
    out << "<title>POS tag percentile</title>\n";
    out << "<line x1=\"" << num(left) << "\" y1=\"" << num(base) << "\" x2=\"" << num(width - 10)
        << "\" y2=\"" << num(base) << "\" stroke=\"#333333\"/>\n";
    for (int tick = 0; tick <= 10; tick += 2) {
        const double y = base - plot_h * tick / 10.0;
        out << "<text x=\"4\" y=\"" << num(y + 3) << "\">" << fmt::format("{:.1f}", tick / 10.0)
            << "</text>\n";
    }

    std::size_t i = 0;
    for (const auto& r : dist.rows) {
        if (!r.rank) continue;
        const double x = left + static_cast<double>(i) * (bar_w + gap) + gap;
        const double h = plot_h * *r.percentile;
        out << "<rect class=\"bar\" data-tag=\"" << xml_escape(r.code) << "\" data-percentile=\""
            << fmt::format("{:.6f}", *r.percentile) << "\" x=\"" << num(x) << "\" y=\""
            << num(base - h) << "\" width=\"" << num(bar_w) << "\" height=\"" << num(h)
            << "\" fill=\"#4e79a7\"><title>" << xml_escape(r.code) << ' ' << r.percentile_display
            << "</title></rect>\n";
        out << "<text transform=\"translate(" << num(x + bar_w / 2) << ' ' << num(base + 6)
            << ") rotate(60)\">" << xml_escape(r.code) << "</text>\n";
        ++i;
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace

ojson distribution_to_json(const TagDistribution& dist) {
    ojson rows = ojson::array();
    for (const auto& r : dist.rows) {
        rows.push_back({{"pos", r.code},
                        {"count", r.count},
                        {"percentage", r.percentage},
                        {"percentage_display", r.percentage_display},
                        {"rank", r.rank ? ojson(*r.rank) : ojson(nullptr)},
                        {"percentile", r.percentile ? ojson(*r.percentile) : ojson(nullptr)},
                        {"percentile_display",
                         r.rank ? ojson(r.percentile_display) : ojson(nullptr)}});
    }
    return {{"total", dist.total},
            {"tag_count", dist.tag_count},
            {"percentile_scheme", to_string(dist.scheme)},
            {"rows", std::move(rows)}};
}

std::string emit_report(const TagDistribution& dist, ReportFormat format,
                        const ReportOptions& options) {
    switch (format) {
        case ReportFormat::Csv: return emit_csv(dist);
        case ReportFormat::Json: {
            ojson doc = distribution_to_json(dist);
            doc["generated_at"] = options.generated_at;
            doc["notes"] = options.notes;
            return doc.dump(2) + '\n';
        }
        case ReportFormat::SvgPie: return emit_pie(dist);
        case ReportFormat::SvgPercentileBars: return emit_percentile_bars(dist);
    }
    return {};
}

const StageOutput* StageRow::output(std::string_view name) const {
    for (const auto& o : outputs)
        if (o.name == name) return &o;
    return nullptr;
}

const StageRow* PipelineSummary::row(std::string_view stage) const {
    for (const auto& r : rows)
        if (r.stage == stage) return &r;
    return nullptr;
}

PipelineSummary pipeline_summary(const Project& project, std::string_view corpus_name) {
    PipelineSummary s;
    s.notes.push_back("source forms are script-normalized before deduplication");
    if (project.size() == 0) return s;

    std::uint64_t tokens = 0;
    for (const auto& e : project.entries()) tokens += e.frequency;
    const std::uint64_t n = project.size();

    s.rows.push_back({std::string(kStageDedup), std::string(corpus_name), tokens,
                      {{"deduplicated entries", n, std::nullopt, ""}}});
    s.rows.push_back({std::string(kStageCsv), "deduplicated entries", n, {{"entries.csv", n, std::nullopt, ""}}});

    const std::uint64_t translated = project.count(Stage::Translated) +
                                     project.count(Stage::Labeled) + project.count(Stage::Reviewed);
    if (translated == 0) return s;
    s.rows.push_back({std::string(kStageTranslate), "entries.csv", n, {{"Translated.csv", translated, std::nullopt, ""}}});

    const std::uint64_t correct_listed =
        project.count(State::LabeledCorrect) + project.count(Stage::Reviewed);
    const std::uint64_t labeled = project.count(Stage::Labeled) + project.count(Stage::Reviewed);
    if (labeled == 0) return s;

    const std::uint64_t repeats = project.source_repeat_count();
    const std::uint64_t correct = correct_listed - repeats;
    StageOutput correct_out{"Correct", correct, std::nullopt, ""};
    if (repeats > 0) {
        correct_out.listed = correct_listed;
        correct_out.note = fmt::format("The list had {} entries; {} repeated source entries removed.",
                                       correct_listed, repeats);
    }
    s.rows.push_back({std::string(kStageTriage),
                      "Translated.csv",
                      translated,
                      {correct_out,
                       {"Not-correct", project.count(State::LabeledNotCorrect), std::nullopt, ""},
                       {"Undecided", project.count(State::LabeledUndecided), std::nullopt, ""},
                       {"AR-tagged", project.ar_count(), std::nullopt, ""}}});

    if (project.count(Stage::Reviewed) == 0) return s;
    s.rows.push_back({std::string(kStageReview),
                      "correct.csv",
                      correct,
                      {{"Accurate", project.count(State::ReviewedAccurate), std::nullopt, ""},
                       {"Repeated", project.count(State::ReviewedRepeated), std::nullopt,
                        "Repeated target-language entries."},
                       {"Concerned", project.count(State::ReviewedConcerned), std::nullopt, ""}}});
    return s;
}

std::string format_summary_table(const PipelineSummary& summary) {
    std::ostringstream out;
    out << fmt::format("{:<34} {:<22} {:>10}  {:<22} {:>10}\n", "Stage", "Input", "Entries",
                       "Output", "Entries");
    std::vector<std::string> footnotes;
    for (const auto& row : summary.rows) {
        for (std::size_t i = 0; i < row.outputs.size(); ++i) {
            const auto& o = row.outputs[i];
            std::string count = std::to_string(o.count);
            if (!o.note.empty()) {
                footnotes.push_back(o.note);
                count += fmt::format(" [{}]", footnotes.size());
            }
            if (i == 0)
                out << fmt::format("{:<34} {:<22} {:>10}  {:<22} {:>10}\n", row.stage, row.input,
                                   row.input_count, o.name, count);
            else
                out << fmt::format("{:<34} {:<22} {:>10}  {:<22} {:>10}\n", "", "", "", o.name, count);
        }
    }
    for (std::size_t i = 0; i < footnotes.size(); ++i)
        out << fmt::format("[{}] {}\n", i + 1, footnotes[i]);
    for (const auto& n : summary.notes) out << "note: " << n << '\n';
    return out.str();
}

ojson summary_to_json(const PipelineSummary& summary) {
    ojson rows = ojson::array();
    for (const auto& r : summary.rows) {
        ojson outs = ojson::array();
        for (const auto& o : r.outputs) {
            ojson j = {{"name", o.name}, {"count", o.count}};
            if (o.listed) j["listed"] = *o.listed;
            if (!o.note.empty()) j["note"] = o.note;
            outs.push_back(std::move(j));
        }
        rows.push_back({{"stage", r.stage},
                        {"input", r.input},
                        {"input_count", r.input_count},
                        {"outputs", std::move(outs)}});
    }
    return {{"rows", std::move(rows)}, {"notes", summary.notes}};
}

}  // namespace taglex
