#pragma once

#include "taglex/entry.hpp"

#include <atomic>
#include <chrono>
#include <cstddef>
#include <functional>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace taglex {

struct LanguagePair {
    std::string src = "fa";
    std::string dst = "ckb";
};

/// A machine-translation service. Output aligns 1:1 with input; nullopt or
/// an empty string marks a per-item failure. Whole-batch failures throw
/// BackendUnavailable (retryable) or RateLimitExceeded (back off, retry).
class TranslatorBackend {
public:
    virtual ~TranslatorBackend() = default;
    virtual std::vector<std::optional<std::string>> translate_batch(
        const std::vector<std::string>& items, const LanguagePair& langs) = 0;
};

enum class MissPolicy { Echo, Fail };

/// Dictionary-backed backend for tests and offline runs. Keys are normalized
/// on construction and lookup.
class StubBackend : public TranslatorBackend {
public:
    StubBackend(std::map<std::string, std::string> dictionary, MissPolicy miss_policy);

    std::vector<std::optional<std::string>> translate_batch(
        const std::vector<std::string>& items, const LanguagePair& langs) override;

    std::size_t batch_calls() const noexcept { return batch_calls_.load(); }
    std::size_t item_calls() const noexcept { return item_calls_.load(); }

private:
    std::map<std::string, std::string> dictionary_;
    MissPolicy miss_policy_;
    std::atomic<std::size_t> batch_calls_{0};
    std::atomic<std::size_t> item_calls_{0};
};

std::shared_ptr<StubBackend> stub_backend(std::map<std::string, std::string> dictionary,
                                          MissPolicy miss_policy);

/// Tries each backend in order for the items still missing; first success wins.
class FallbackBackend : public TranslatorBackend {
public:
    explicit FallbackBackend(std::vector<std::shared_ptr<TranslatorBackend>> chain);

    std::vector<std::optional<std::string>> translate_batch(
        const std::vector<std::string>& items, const LanguagePair& langs) override;

private:
    std::vector<std::shared_ptr<TranslatorBackend>> chain_;
};

/// `source<TAB>target` lines; tab, newline and backslash are escaped as
/// \t, \n and \\ so every string round-trips.
std::map<std::string, std::string> read_tsv_map(std::istream& in);
void write_tsv_map(std::ostream& out, const std::map<std::string, std::string>& map);

/// Translation cache for one language pair, keyed by normalized source.
class TranslationCache {
public:
    TranslationCache() = default;
    explicit TranslationCache(LanguagePair langs) : langs_(std::move(langs)) {}

    const LanguagePair& langs() const noexcept { return langs_; }
    std::optional<std::string> get(const std::string& source) const;
    void put(const std::string& source, const std::string& target);
    std::size_t size() const;

    void load(std::istream& in);
    void save(std::ostream& out) const;

    /// File name used inside a project directory.
    std::string file_name() const;

private:
    LanguagePair langs_;
    mutable std::mutex mu_;
    std::map<std::string, std::string> map_;
};

/// Time source for rate limiting and backoff.
class RateClock {
public:
    using time_point = std::chrono::steady_clock::time_point;
    virtual ~RateClock() = default;
    virtual time_point now() = 0;
    virtual void sleep_until(time_point t) = 0;
};

RateClock& steady_rate_clock();

/// Sliding-window limiter: at most ceil(r) calls per window of ceil(r)/r
/// seconds, so no 1-second window sees more than ceil(r) calls and the
/// long-run rate is r. Thread-safe.
class RateLimiter {
public:
    RateLimiter(double rate_per_sec, RateClock& clock);
    /// Blocks until a call slot is available.
    void acquire();

private:
    std::size_t burst_;
    std::chrono::nanoseconds window_;
    RateClock& clock_;
    std::mutex mu_;
    std::vector<RateClock::time_point> slots_;
};

struct TranslateConfig {
    std::size_t batch_size = 50;
    std::size_t max_in_flight = 1;
    std::size_t retries = 3;
    double rate_per_sec = 10.0;
    std::chrono::milliseconds initial_backoff{200};
    LanguagePair langs;

    /// Throws InvalidArgument on out-of-range values.
    void validate() const;
};

struct TranslationFailure {
    std::string entry_id;
    std::string source_form;
    std::string reason;
};

/// One committed batch: normalized source -> translation for its successes.
using BatchCommit = std::function<void(const std::map<std::string, std::string>&)>;

struct TranslateOutcome {
    std::vector<LexiconEntry> entries;
    std::vector<TranslationFailure> failures;
    std::size_t batches = 0;
    std::size_t cache_hits = 0;
};

/// Moves Deduped entries to Translated. Cache misses (unique sources, in
/// input order) are sent in batches of `batch_size`, up to `max_in_flight`
/// at a time. Each successful batch updates the cache and is passed to
/// `on_commit` under a single lock before the next commit. Entries keep
/// input order; failed items stay Deduped and are listed in `failures`.
/// Throws BackendUnavailable once a batch exhausts its retries; batches
/// committed before that remain committed.
TranslateOutcome translate_entries(const std::vector<LexiconEntry>& entries,
                                   TranslatorBackend& backend, TranslationCache& cache,
                                   const TranslateConfig& cfg,
                                   const BatchCommit& on_commit = {},
                                   RateClock& clock = steady_rate_clock());

/// `id,source_form,tag,frequency,translation,state`
std::string export_translated_csv(const std::vector<LexiconEntry>& entries);
/// Throws MalformedCsv with the offending line.
std::vector<LexiconEntry> import_translated_csv(std::istream& in);

}  // namespace taglex
