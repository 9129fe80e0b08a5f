#include "support.hpp"
#include "taglex/error.hpp"
#include "taglex/translate.hpp"

#include <doctest.h>

#include <mutex>
#include <set>
#include <sstream>

using namespace taglex;

namespace {

class FakeRateClock : public RateClock {
public:
    time_point now() override {
        std::lock_guard lock(mu_);
        return t_;
    }
    void sleep_until(time_point t) override {
        std::lock_guard lock(mu_);
        if (t > t_) t_ = t;
    }

private:
    std::mutex mu_;
    time_point t_{};
};

/// Records the fake time of every call and fails on demand.
class ScriptedBackend : public TranslatorBackend {
public:
    explicit ScriptedBackend(RateClock& clock) : clock_(clock) {}

    std::vector<std::optional<std::string>> translate_batch(const std::vector<std::string>& items,
                                                            const LanguagePair&) override {
        std::lock_guard lock(mu_);
        calls.push_back(clock_.now());
        if (fail_next > 0) {
            --fail_next;
            throw BackendUnavailable("scripted outage");
        }
        if (rate_limit_next > 0) {
            --rate_limit_next;
            throw RateLimitExceeded("slow down");
        }
        std::vector<std::optional<std::string>> out;
        for (const auto& s : items) out.push_back("T:" + s);
        return out;
    }

    std::vector<RateClock::time_point> calls;
    int fail_next = 0;
    int rate_limit_next = 0;

private:
    RateClock& clock_;
    std::mutex mu_;
};

LexiconEntry deduped(const std::string& src, const std::string& tag = "N_SING") {
    LexiconEntry e;
    e.id = entry_id(src, tag);
    e.source_form = src;
    e.tag = tag;
    e.frequency = 1;
    e.state = State::Deduped;
    return e;
}

std::vector<LexiconEntry> words(std::size_t n) {
    std::vector<LexiconEntry> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(deduped("w" + std::to_string(i)));
    return out;
}

TranslateConfig fast(std::size_t batch) {
    TranslateConfig cfg;
    cfg.batch_size = batch;
    cfg.rate_per_sec = 1000;
    cfg.initial_backoff = std::chrono::milliseconds(1);
    return cfg;
}

}  // namespace

TEST_SUITE("translate") {

TEST_CASE("stub backend: hit, echo and fail") {
    StubBackend echo({{"رفت", "ڕۆیشت"}}, MissPolicy::Echo);
    CHECK(echo.translate_batch({"رفت"}, {}) == std::vector<std::optional<std::string>>{"ڕۆیشت"});
    CHECK(echo.translate_batch({"xyz"}, {}) == std::vector<std::optional<std::string>>{"xyz"});
    StubBackend fail({}, MissPolicy::Fail);
    CHECK(fail.translate_batch({"xyz"}, {}) == std::vector<std::optional<std::string>>{std::nullopt});
    CHECK(fail.batch_calls() == 1);
    CHECK(fail.item_calls() == 1);
}

TEST_CASE("three entries with a full dictionary, then all cache hits") {
    auto stub = stub_backend({{"کتاب", "کتێب"}, {"رفت", "ڕۆیشت"}, {"خوب", "باش"}}, MissPolicy::Fail);
    TranslationCache cache;
    FakeRateClock clock;
    const std::vector<LexiconEntry> in = {deduped("کتاب"), deduped("رفت", "V_PA"), deduped("خوب", "ADJ_SIM")};

    const auto first = translate_entries(in, *stub, cache, fast(50), {}, clock);
    CHECK(first.failures.empty());
    REQUIRE(first.entries.size() == 3);
    for (const auto& e : first.entries) CHECK(e.state == State::Translated);
    CHECK(first.entries[1].translation == "ڕۆیشت");
    const auto calls = stub->batch_calls();

    const auto second = translate_entries(in, *stub, cache, fast(50), {}, clock);
    CHECK(stub->batch_calls() == calls);
    CHECK(second.cache_hits == 3);
    CHECK(second.entries == first.entries);
}

TEST_CASE("failed items stay deduped and are reported") {
    auto stub = stub_backend({{"کتاب", "کتێب"}, {"خالی", ""}}, MissPolicy::Fail);
    TranslationCache cache;
    FakeRateClock clock;
    const auto out = translate_entries({deduped("کتاب"), deduped("نیست"), deduped("خالی")}, *stub, cache,
                                       fast(2), {}, clock);
    REQUIRE(out.failures.size() == 2);
    CHECK(out.entries.size() == 3);
    CHECK(out.entries[1].state == State::Deduped);
    CHECK_FALSE(out.entries[1].translation.has_value());
    CHECK(out.entries[2].state == State::Deduped);
    CHECK(cache.size() == 1);
}

TEST_CASE("non-deduped input is a stage error") {
    auto e = deduped("کتاب");
    e.state = State::Translated;
    e.translation = "x";
    StubBackend stub({}, MissPolicy::Echo);
    TranslationCache cache;
    CHECK_THROWS_AS(translate_entries({e}, stub, cache, fast(1)), StageError);
}

TEST_CASE("results do not depend on batch size or concurrency") {
    std::mt19937_64 rng(3);
    std::vector<LexiconEntry> in;
    std::map<std::string, std::string> dict;
    std::set<std::string> seen;
    while (in.size() < 120) {
        const std::string w = testing::random_word(rng, 2, 6);
        if (!seen.insert(w).second) continue;
        in.push_back(deduped(w));
        if (in.size() % 3) dict[w] = testing::random_word(rng, 2, 6);
    }
    std::vector<LexiconEntry> reference;
    for (std::size_t batch : {1, 7, 50}) {
        for (std::size_t inflight : {1, 4}) {
            auto stub = stub_backend(dict, MissPolicy::Echo);
            TranslationCache cache;
            FakeRateClock clock;
            auto cfg = fast(batch);
            cfg.max_in_flight = inflight;
            const auto out = translate_entries(in, *stub, cache, cfg, {}, clock);
            CHECK(out.batches == (in.size() + batch - 1) / batch);
            if (reference.empty()) reference = out.entries;
            CHECK(out.entries == reference);
        }
    }
}

TEST_CASE("84,467 cold misses at batch size 50 make 1,690 batches") {
    StubBackend stub({}, MissPolicy::Echo);
    TranslationCache cache;
    FakeRateClock clock;
    auto cfg = fast(50);
    cfg.rate_per_sec = 1e6;
    const auto out = translate_entries(words(84467), stub, cache, cfg, {}, clock);
    CHECK(out.batches == 1690);
    CHECK(stub.batch_calls() == 1690);
    CHECK(out.failures.empty());
}

TEST_CASE("no one-second window sees more than ceil(rate) calls") {
    for (double rate : {1.0, 2.5, 10.0}) {
        FakeRateClock clock;
        ScriptedBackend backend(clock);
        TranslationCache cache;
        auto cfg = fast(1);
        cfg.rate_per_sec = rate;
        translate_entries(words(40), backend, cache, cfg, {}, clock);
        REQUIRE(backend.calls.size() == 40);
        const auto limit = static_cast<std::size_t>(std::ceil(rate));
        for (std::size_t i = 0; i < backend.calls.size(); ++i) {
            std::size_t in_window = 0;
            for (std::size_t j = i; j < backend.calls.size(); ++j)
                if (backend.calls[j] - backend.calls[i] < std::chrono::seconds(1)) ++in_window;
            CHECK(in_window <= limit);
        }
        // The long-run rate is honoured too.
        const double span = std::chrono::duration<double>(backend.calls.back() - backend.calls.front()).count();
        CHECK(span >= (40.0 - static_cast<double>(limit)) / rate - 1e-9);
    }
}

TEST_CASE("retries with backoff then succeeds") {
    FakeRateClock clock;
    ScriptedBackend backend(clock);
    backend.fail_next = 2;
    backend.rate_limit_next = 1;
    TranslationCache cache;
    auto cfg = fast(10);
    cfg.retries = 3;
    cfg.initial_backoff = std::chrono::milliseconds(100);
    const auto out = translate_entries(words(5), backend, cache, cfg, {}, clock);
    CHECK(out.failures.empty());
    REQUIRE(backend.calls.size() == 4);
    CHECK(backend.calls[1] - backend.calls[0] >= std::chrono::milliseconds(100));
    CHECK(backend.calls[2] - backend.calls[1] >= std::chrono::milliseconds(200));
    CHECK(backend.calls[3] - backend.calls[2] >= std::chrono::milliseconds(400));
}

TEST_CASE("exhausted retries abort after committing earlier batches") {
    FakeRateClock clock;
    ScriptedBackend backend(clock);
    TranslationCache cache;
    auto cfg = fast(2);
    cfg.retries = 1;
    std::size_t commits = 0;
    auto on_commit = [&](const std::map<std::string, std::string>&) {
        if (++commits == 2) backend.fail_next = 100;
    };
    CHECK_THROWS_AS(translate_entries(words(10), backend, cache, cfg, on_commit, clock), BackendUnavailable);
    CHECK(commits == 2);
    CHECK(cache.size() == 4);

    // A rerun resumes: only the three uncommitted batches reach the backend.
    backend.fail_next = 0;
    backend.calls.clear();
    const auto out = translate_entries(words(10), backend, cache, cfg, {}, clock);
    CHECK(out.cache_hits == 4);
    CHECK(backend.calls.size() == 3);
}

TEST_CASE("fallback chain fills what the primary misses") {
    auto primary = stub_backend({{"a", "A"}}, MissPolicy::Fail);
    auto secondary = stub_backend({{"b", "B"}}, MissPolicy::Fail);
    FallbackBackend chain({primary, secondary});
    const auto out = chain.translate_batch({"a", "b", "c"}, {});
    CHECK(out == std::vector<std::optional<std::string>>{"A", "B", std::nullopt});
    CHECK(secondary->item_calls() == 2);
}

TEST_CASE("config validation") {
    TranslateConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.batch_size = 0;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    cfg = {};
    cfg.rate_per_sec = 0;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    cfg = {};
    cfg.max_in_flight = 0;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}

TEST_CASE("cache file round-trips awkward strings") {
    TranslationCache cache({"fa", "ckb"});
    cache.put("کتاب", "کتێب");
    cache.put("a\tb", "line\nbreak \\ slash");
    std::ostringstream out;
    cache.save(out);
    TranslationCache loaded({"fa", "ckb"});
    std::istringstream in(out.str());
    loaded.load(in);
    CHECK(loaded.size() == 2);
    CHECK(loaded.get("a\tb") == "line\nbreak \\ slash");
    CHECK(loaded.get("كتاب") == "کتێب");
    CHECK(cache.file_name() == "translation-cache.fa-ckb.tsv");
}

TEST_CASE("translated csv round-trips") {
    std::vector<LexiconEntry> in = {deduped("کتاب"), deduped("رفت", "V_PA")};
    in[0].state = State::Translated;
    in[0].translation = "کتێب, کتێبەکە";
    const std::string two = export_translated_csv(in);
    CHECK(std::count(two.begin(), two.end(), '\n') == 3);
    CHECK(two.find("\"کتێب, کتێبەکە\"") != std::string::npos);

    std::mt19937_64 rng(11);
    std::vector<LexiconEntry> many;
    std::set<std::string> seen;
    while (many.size() < 500) {
        auto e = deduped(testing::random_word(rng, 1, 6), "ADJ_SIM");
        if (!seen.insert(e.id).second) continue;
        e.frequency = rng() % 1000 + 1;
        if (rng() % 4) {
            e.state = State::Translated;
            e.translation = testing::random_word(rng, 1, 4) + (rng() % 5 == 0 ? ", \"x\"\n" : "");
        }
        many.push_back(e);
    }
    const std::string first = export_translated_csv(many);
    std::istringstream in1(first);
    const auto back = import_translated_csv(in1);
    CHECK(back == many);
    CHECK(export_translated_csv(back) == first);
}

TEST_CASE("translated csv import reports the bad line") {
    std::istringstream bad(
        "id,source_form,tag,frequency,translation,state\n"
        + entry_id("کتاب", "N_SING") + ",کتاب,N_SING,1,کتێب,translated\n"
        + entry_id("رفت", "V_PA") + ",رفت,V_PA,zero,,deduped\n");
    try {
        import_translated_csv(bad);
        FAIL("expected MalformedCsv");
    } catch (const MalformedCsv& e) {
        CHECK(e.line_no() == 3);
    }
}

}  // TEST_SUITE
