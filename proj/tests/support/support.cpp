#include "support.hpp"

#include "taglex/error.hpp"
#include "taglex/ingest.hpp"
#include "taglex/review.hpp"
#include "taglex/tagset.hpp"
#include "taglex/unicode.hpp"

#include <algorithm>
#include <atomic>
#include <memory>
#include <set>
#include <sstream>

namespace fs = std::filesystem;

namespace taglex::testing {

const std::vector<PublishedRow>& published_table() {
    static const std::vector<PublishedRow> rows = {
        {"ADJ", 4, "0.0003", "0.1"},        {"ADJ_CMPR", 133, "0.0099", "0.8"},
        {"ADJ_INO", 52, "0.0039", "0.6"},   {"ADJ_ORD", 21, "0.0016", "0.4"},
        {"ADJ_SIM", 2181, "0.1629", "0.9"}, {"ADJ_SUP", 153, "0.0114", "0.8"},
        {"ADV", 23, "0.0017", "0.4"},       {"ADV_EXM", 8, "0.0006", "0.2"},
        {"ADV_I", 11, "0.0008", "0.3"},     {"ADV_NEGG", 8, "0.0006", "0.2"},
        {"ADV_NI", 314, "0.0235", "0.9"},   {"ADV_TIME", 58, "0.0043", "0.7"},
        {"CON", 119, "0.0089", "0.7"},      {"DEFAULT", 5, "0.0004", "0.2"},
        {"DELM", 75, "0.0056", "0.7"},      {"DET", 14, "0.0010", "0.3"},
        {"IF", 4, "0.0003", "0.1"},         {"INT", 4, "0.0003", "0.1"},
        {"MORP", 25, "0.0019", "0.4"},      {"MQUA", 3, "0.0002", "0.08"},
        {"N_PL", 2147, "0.1604", "0.9"},    {"N_SING", 6998, "0.5228", "1"},
        {"NP", 6, "0.0004", "0.2"},         {"OH", 2, "0.0001", "0.05"},
        {"OHH", 1, "0.0001", "0.03"},       {"P", 50, "0.0037", "0.6"},
        {"PP", 27, "0.0020", "0.5"},        {"PRO", 44, "0.0033", "0.6"},
        {"PS", 15, "0.0011", "0.3"},        {"QUA", 29, "0.0022", "0.5"},
        {"SPEC", 34, "0.0025", "0.5"},      {"V_AUX", 22, "0.0016", "0.4"},
        {"V_IMP", 48, "0.0036", "0.6"},     {"V_PA", 274, "0.0205", "0.9"},
        {"V_PRE", 209, "0.0156", "0.8"},    {"V_PRS", 165, "0.0123", "0.8"},
        {"V_SUB", 99, "0.0074", "0.7"},
    };
    return rows;
}

std::vector<TagCount> published_counts() {
    std::vector<TagCount> out;
    for (const auto& r : published_table()) out.emplace_back(r.code, r.count);
    return out;
}

Clock counting_clock() {
    auto tick = std::make_shared<std::atomic<std::int64_t>>(0);
    const Timestamp start = std::chrono::sys_days{std::chrono::year{2026} / 1 / 1};
    return [tick, start] { return start + std::chrono::milliseconds(tick->fetch_add(1)); };
}

TempDir::TempDir(const std::string& label) {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = fs::temp_directory_path() /
            ("taglex-" + label + "-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    fs::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

fs::path resource_dir() { return TAGLEX_RESOURCE_DIR; }
fs::path cli_binary() { return TAGLEX_CLI_PATH; }

namespace {

// U+0627..U+064A minus a few gaps, plus the Persian letters.
const std::vector<char32_t>& letters() {
    static const std::vector<char32_t> v = [] {
        std::vector<char32_t> out;
        for (char32_t c = 0x0627; c <= 0x063A; ++c) out.push_back(c);
        for (char32_t c = 0x0641; c <= 0x064A; ++c) out.push_back(c);
        for (char32_t c : {0x067E, 0x0686, 0x0698, 0x06A9, 0x06AF, 0x06CC, 0x06D5, 0x06B5, 0x06CE, 0x0695})
            out.push_back(c);
        return out;
    }();
    return v;
}

template <typename T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

bool chance(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

}  // namespace

std::string fuzz_perso_string(std::mt19937_64& rng, std::size_t max_len) {
    static const std::vector<char32_t> specials = {
        0x064A, 0x0643, 0x0660, 0x0661, 0x0665, 0x0669, 0x06F0, 0x06F9, 0x200C, 0x200C, 0x0640,
        0x064B, 0x064E, 0x0650, 0x0651, 0x0652, U' ', U' ',  U'\t', 0x00A0, 0x3000, U'a',
        U'Z',   U'7',   0x0020, 0x200D, 0xFEFF, 0x06CC, 0x06A9};
    const std::size_t len = std::uniform_int_distribution<std::size_t>(0, max_len)(rng);
    std::u32string s;
    for (std::size_t i = 0; i < len; ++i) s.push_back(chance(rng, 0.5) ? pick(rng, letters()) : pick(rng, specials));
    return unicode::encode(s);
}

std::string random_word(std::mt19937_64& rng, std::size_t min_len, std::size_t max_len) {
    const std::size_t len = std::uniform_int_distribution<std::size_t>(min_len, max_len)(rng);
    std::u32string s;
    for (std::size_t i = 0; i < len; ++i) s.push_back(pick(rng, letters()));
    return unicode::normalize(unicode::encode(s));
}

Project random_translated_project(std::mt19937_64& rng, std::size_t n, std::size_t target_pool) {
    const auto& tags = default_tagset().tags();
    std::vector<std::string> pool;
    for (std::size_t i = 0; i < target_pool; ++i) {
        std::string w = random_word(rng, 2, 6);
        // Some targets carry a pronoun that a reviewer may strip.
        if (chance(rng, 0.1)) w = "من " + w;
        if (chance(rng, 0.05)) w += " تۆ";
        pool.push_back(w);
    }

    std::set<std::pair<std::string, std::string>> keys;
    std::vector<LexiconEntry> entries;
    while (entries.size() < n) {
        const std::string tag = chance(rng, 1.0 / 12) ? std::string(kArTag)
                                                      : pick(rng, tags).code;
        const std::string src = random_word(rng, 1, 5);
        if (!keys.emplace(src, tag).second) continue;
        LexiconEntry e;
        e.id = entry_id(src, tag);
        e.source_form = src;
        e.tag = tag;
        e.frequency = std::uniform_int_distribution<std::uint64_t>(1, 50)(rng);
        e.state = State::Deduped;
        entries.push_back(std::move(e));
    }

    Project p("random", default_tagset(), counting_clock());
    add_entries(p, entries, "gen");
    for (const auto& e : entries) p.commit(e.id, TranslatePayload{pick(rng, pool)}, "mt");
    return p;
}

void drive_to_completion(Project& project, std::mt19937_64& rng) {
    std::vector<std::string> ids;
    for (const auto& e : project.entries()) ids.push_back(e.id);

    for (const auto& id : ids) {
        if (project.at(id).state != State::Translated) continue;
        if (chance(rng, 0.1)) {
            try {
                trivial_edit(project, id, TrivialEdit::strip_leading(), "annotator");
            } catch (const NothingToStrip&) {
            }
        }
        const double r = std::uniform_real_distribution<double>(0, 1)(rng);
        const Label l = r < 0.5 ? Label::Correct : r < 0.8 ? Label::NotCorrect : Label::Undecided;
        label(project, id, l, "annotator");
        if (project.at(id).tag == kArTag) flag_ar(project, id, "annotator");
    }

    collapse_target_duplicates(project, "annotator");

    for (const auto& id : ids) {
        if (!in_review_pool(project.at(id))) continue;
        if (chance(rng, 0.1)) {
            try {
                trivial_edit(project, id, TrivialEdit::strip_trailing(), "reviewer");
            } catch (const NothingToStrip&) {
            }
        }
        review_accuracy(project, id, chance(rng, 0.9) ? Verdict::Accurate : Verdict::Concerned,
                        "reviewer");
    }
}

void random_session(Project& project, std::mt19937_64& rng, std::size_t steps) {
    std::vector<std::string> ids;
    for (const auto& e : project.entries()) ids.push_back(e.id);
    const std::vector<std::string> actors = {"ana", "bahoz", "shilan"};

    for (std::size_t i = 0; i < steps; ++i) {
        const std::string& id = pick(rng, ids);
        const std::string& actor = pick(rng, actors);
        const auto before_seq = project.last_seq();
        const LexiconEntry before = project.at(id);
        try {
            switch (std::uniform_int_distribution<int>(0, 9)(rng)) {
                case 0:
                case 1:
                case 2:
                    label(project, id, static_cast<Label>(std::uniform_int_distribution<int>(0, 2)(rng)), actor);
                    break;
                case 3:
                    unlabel(project, id, actor);
                    break;
                case 4:
                    trivial_edit(project, id, TrivialEdit::strip_leading(), actor);
                    break;
                case 5:
                    trivial_edit(project, id,
                                 TrivialEdit::manual(before.translation.value_or(""), random_word(rng, 2, 5)),
                                 actor);
                    break;
                case 6:
                case 7:
                    review_accuracy(project, id, chance(rng, 0.7) ? Verdict::Accurate : Verdict::Concerned,
                                    actor);
                    break;
                case 8:
                    flag_ar(project, id, actor);
                    break;
                default:
                    if (chance(rng, 0.2)) collapse_target_duplicates(project, actor);
                    break;
            }
        } catch (const Error&) {
            if (project.last_seq() != before_seq || !(project.at(id) == before))
                throw std::logic_error("rejected operation left a trace on " + id);
        }
    }
}

std::vector<std::pair<std::string, std::string>> brute_force_collapse(const Project& project) {
    const auto& all = project.entries();
    auto same_key = [](const LexiconEntry& a, const LexiconEntry& b) {
        return a.tag == b.tag && a.translation && b.translation &&
               unicode::normalize(*a.translation) == unicode::normalize(*b.translation);
    };
    // true if a should be kept over b
    auto beats = [](const LexiconEntry& a, const LexiconEntry& b) {
        if (a.frequency != b.frequency) return a.frequency > b.frequency;
        if (a.source_form != b.source_form) return a.source_form < b.source_form;
        return a.id < b.id;
    };

    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& e : all) {
        if (!in_review_pool(e)) continue;
        const LexiconEntry* keep = nullptr;
        for (const auto& other : all)
            if (other.state == State::ReviewedAccurate && same_key(e, other) && (!keep || beats(other, *keep)))
                keep = &other;
        if (!keep) {
            bool has_partner = false;
            keep = &e;
            for (const auto& other : all) {
                if (&other == &e || !in_review_pool(other) || !same_key(e, other)) continue;
                has_partner = true;
                if (beats(other, *keep)) keep = &other;
            }
            if (!has_partner) continue;
        }
        if (keep != &e) out.emplace_back(e.id, keep->id);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<csv::Row> read_csv(const std::string& text) {
    std::istringstream in(text);
    csv::Reader reader(in);
    std::vector<csv::Row> rows;
    while (auto row = reader.next()) rows.push_back(std::move(*row));
    return rows;
}

}  // namespace taglex::testing
