#include "support.hpp"
#include "taglex/error.hpp"
#include "taglex/ingest.hpp"
#include "taglex/project.hpp"
#include "taglex/unicode.hpp"

#include <doctest.h>

#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

using namespace taglex;

namespace {

ParseResult parse(const std::string& text, CorpusFormat fmt = {}) {
    std::istringstream in(text);
    return parse_corpus(in, fmt, default_tagset());
}

std::vector<CorpusToken> expand(const std::vector<LexiconEntry>& entries) {
    std::vector<CorpusToken> out;
    for (const auto& e : entries)
        for (std::uint64_t i = 0; i < e.frequency; ++i) out.push_back({e.source_form, e.tag, 0});
    return out;
}

}  // namespace

TEST_SUITE("ingest") {

TEST_CASE("well-formed tab lines parse") {
    const auto r = parse("کتاب\tN_SING\nرفت\tV_PA\n");
    CHECK(r.tokens.size() == 2);
    CHECK(r.quarantine.empty());
    CHECK(r.tokens[1].line_no == 2);
    CHECK(r.delimiter == '\t');
}

TEST_CASE("unknown tags, empty surfaces and malformed lines are quarantined") {
    const auto r = parse("foo\tZZZ\n\tN_SING\nnodelimiter\nکتاب\tN_SING\n");
    CHECK(r.tokens.size() == 1);
    REQUIRE(r.quarantine.size() == 3);
    CHECK(r.quarantine[0].reason == QuarantineReason::UnknownTag);
    CHECK(r.quarantine[0].raw_line == "foo\tZZZ");
    CHECK(r.quarantine[1].reason == QuarantineReason::EmptySurface);
    CHECK(r.quarantine[2].reason == QuarantineReason::MalformedLine);
    CHECK(r.quarantine[2].line_no == 3);
}

TEST_CASE("blank and comment lines are skipped") {
    CorpusFormat fmt;
    fmt.comment_prefix = "#";
    const auto r = parse("# header\n\n   \nکتاب\tN_SING\r\n", fmt);
    CHECK(r.tokens.size() == 1);
    CHECK(r.quarantine.empty());
}

TEST_CASE("auto delimiter picks space by majority") {
    const auto r = parse("کتاب N_SING\nرفت V_PA\nمن دەچم\tV_PRS\n");
    CHECK(r.delimiter == ' ');
    CHECK(r.tokens.size() == 2);
    CHECK(r.quarantine.size() == 1);
}

TEST_CASE("multi-word surfaces split at the last delimiter") {
    CorpusFormat fmt;
    fmt.delimiter = DelimiterKind::Space;
    const auto r = parse("به عنوان P\n", fmt);
    REQUIRE(r.tokens.size() == 1);
    CHECK(r.tokens[0].surface == "به عنوان");
}

TEST_CASE("invalid utf-8 is fatal") {
    try {
        parse("کتاب\tN_SING\nab\xFF\tN_SING\n");
        FAIL("expected EncodingError");
    } catch (const EncodingError& e) {
        CHECK(e.line_no() == 2);
    }
}

TEST_CASE("delimiters that can occur in tag codes are refused") {
    CHECK_THROWS_AS(parse_delimiter("_").validate(), InvalidArgument);
    CHECK_THROWS_AS(parse_delimiter("A").validate(), InvalidArgument);
    CHECK_NOTHROW(parse_delimiter("|").validate());
    CHECK(parse_delimiter("tab").delimiter == DelimiterKind::Tab);
}

TEST_CASE("dedup keys on normalized surface and tag") {
    const std::vector<CorpusToken> toks = {
        {"کتاب", "N_SING", 1}, {"\u0643\u062A\u0627\u0628", "N_SING", 2}, {"کتاب", "N_PL", 3}};
    const auto entries = dedup(toks);
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].tag == "N_PL");
    CHECK(entries[0].frequency == 1);
    CHECK(entries[1].frequency == 2);
    CHECK(entries[1].state == State::Deduped);
    CHECK(dedup({}).empty());
}

TEST_CASE("toy corpus: counts agree with an independent tally") {
    std::ifstream in(testing::resource_dir() / "toy" / "corpus.txt", std::ios::binary);
    std::stringstream text;
    text << in.rdbuf();

    std::size_t lines = 0, non_blank = 0;
    std::map<std::pair<std::string, std::string>, std::uint64_t> oracle;
    std::string line;
    std::istringstream scan(text.str());
    while (std::getline(scan, line)) {
        ++lines;
        if (line.empty()) continue;
        ++non_blank;
        const auto tab = line.rfind('\t');
        if (tab == std::string::npos || tab == 0) continue;
        const std::string tag = line.substr(tab + 1);
        if (!default_tagset().contains(tag)) continue;
        ++oracle[{tag, unicode::normalize(line.substr(0, tab))}];
    }
    CHECK(lines == 200);

    std::istringstream again(text.str());
    const auto r = parse_corpus(again, {}, default_tagset());
    CHECK(r.tokens.size() == non_blank - r.quarantine.size());
    CHECK(r.quarantine.size() == 3);

    const auto entries = dedup(r.tokens);
    CHECK(entries.size() == oracle.size());
    for (const auto& e : entries) CHECK(oracle[{e.tag, e.source_form}] == e.frequency);
}

TEST_CASE("dedup conserves frequency and is a fixpoint on fuzzed corpora") {
    std::mt19937_64 rng(7);
    const auto& tags = default_tagset().tags();
    for (int round = 0; round < 200; ++round) {
        std::vector<CorpusToken> toks;
        const int n = std::uniform_int_distribution<int>(0, 60)(rng);
        for (int i = 0; i < n; ++i) {
            std::string s = testing::fuzz_perso_string(rng, 4);
            if (unicode::normalize(s).empty()) s = "ب";
            toks.push_back({s, tags[std::uniform_int_distribution<std::size_t>(0, 5)(rng)].code, 0});
        }
        const auto entries = dedup(toks);
        const auto total = std::accumulate(entries.begin(), entries.end(), std::uint64_t{0},
                                           [](std::uint64_t a, const LexiconEntry& e) { return a + e.frequency; });
        CHECK(total == toks.size());
        CHECK(dedup(expand(entries)) == entries);
    }
}

TEST_CASE("add_entries is resumable and rejects a different corpus") {
    const auto entries = dedup({{"کتاب", "N_SING", 1}, {"رفت", "V_PA", 2}});
    Project p("t", default_tagset(), testing::counting_clock());
    CHECK(add_entries(p, entries, "t") == 2);
    CHECK(add_entries(p, entries, "t") == 0);
    CHECK(p.last_seq() == 2);

    auto changed = entries;
    changed[0].frequency = 9;
    CHECK_THROWS_AS(add_entries(p, changed, "t"), StageError);
}

TEST_CASE("entries and quarantine csv shapes") {
    std::ostringstream out;
    write_entries_csv(out, dedup({{"کتاب", "N_SING", 1}}));
    CHECK(out.str() == "id,source_form,tag,frequency\n" + entry_id("کتاب", "N_SING") + ",کتاب,N_SING,1\n");

    std::ostringstream q;
    write_quarantine_csv(q, {{4, "a,b\tZZZ", QuarantineReason::UnknownTag}});
    CHECK(q.str() == "line_no,reason,raw_line\n4,unknown-tag,\"a,b\tZZZ\"\n");
}

}  // TEST_SUITE
