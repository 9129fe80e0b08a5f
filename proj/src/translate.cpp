#include "taglex/translate.hpp"

#include "taglex/csv.hpp"
#include "taglex/error.hpp"
#include "taglex/unicode.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

namespace taglex {

StubBackend::StubBackend(std::map<std::string, std::string> dictionary, MissPolicy miss_policy)
    : miss_policy_(miss_policy) {
    for (auto& [k, v] : dictionary) dictionary_.emplace(unicode::normalize(k), std::move(v));
}

std::vector<std::optional<std::string>> StubBackend::translate_batch(
    const std::vector<std::string>& items, const LanguagePair&) {
    ++batch_calls_;
    item_calls_ += items.size();
    std::vector<std::optional<std::string>> out;
    out.reserve(items.size());
    for (const auto& s : items) {
        auto it = dictionary_.find(unicode::normalize(s));
        if (it != dictionary_.end())
            out.emplace_back(it->second);
        else if (miss_policy_ == MissPolicy::Echo)
            out.emplace_back(s);
        else
            out.emplace_back(std::nullopt);
    }
    return out;
}

std::shared_ptr<StubBackend> stub_backend(std::map<std::string, std::string> dictionary,
                                          MissPolicy miss_policy) {
    return std::make_shared<StubBackend>(std::move(dictionary), miss_policy);
}

FallbackBackend::FallbackBackend(std::vector<std::shared_ptr<TranslatorBackend>> chain)
    : chain_(std::move(chain)) {
    if (chain_.empty()) throw InvalidArgument("fallback chain is empty");
}

std::vector<std::optional<std::string>> FallbackBackend::translate_batch(
    const std::vector<std::string>& items, const LanguagePair& langs) {
    std::vector<std::optional<std::string>> out(items.size());
    std::vector<std::size_t> missing(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) missing[i] = i;

    for (std::size_t b = 0; b < chain_.size() && !missing.empty(); ++b) {
        std::vector<std::string> ask;
        ask.reserve(missing.size());
        for (std::size_t i : missing) ask.push_back(items[i]);

        std::vector<std::optional<std::string>> got;
        try {
            got = chain_[b]->translate_batch(ask, langs);
        } catch (const BackendUnavailable&) {
            if (b + 1 == chain_.size()) throw;
            continue;
        }
        if (got.size() != ask.size()) throw BackendUnavailable("backend returned misaligned batch");

        std::vector<std::size_t> still;
        for (std::size_t k = 0; k < missing.size(); ++k) {
            if (got[k] && !got[k]->empty())
                out[missing[k]] = std::move(got[k]);
            else
                still.push_back(missing[k]);
        }
        missing = std::move(still);
    }
    return out;
}

namespace {

std::string escape_tsv(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '\t': out += "\\t"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string unescape_tsv(std::string_view s, std::size_t line_no) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '\\') {
            out.push_back(s[i]);
            continue;
        }
        if (++i == s.size()) throw InvalidArgument("line " + std::to_string(line_no) + ": dangling escape");
        switch (s[i]) {
            case '\\': out.push_back('\\'); break;
            case 't': out.push_back('\t'); break;
            case 'n': out.push_back('\n'); break;
            case 'r': out.push_back('\r'); break;
            default: throw InvalidArgument("line " + std::to_string(line_no) + ": bad escape");
        }
    }
    return out;
}

}  // namespace

std::map<std::string, std::string> read_tsv_map(std::istream& in) {
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
            throw InvalidArgument("line " + std::to_string(line_no) + ": expected source<TAB>target");
        out[unescape_tsv(std::string_view(line).substr(0, tab), line_no)] =
            unescape_tsv(std::string_view(line).substr(tab + 1), line_no);
    }
    return out;
}

void write_tsv_map(std::ostream& out, const std::map<std::string, std::string>& map) {
    for (const auto& [k, v] : map) out << escape_tsv(k) << '\t' << escape_tsv(v) << '\n';
}

std::optional<std::string> TranslationCache::get(const std::string& source) const {
    std::lock_guard lock(mu_);
    auto it = map_.find(unicode::normalize(source));
    if (it == map_.end()) return std::nullopt;
    return it->second;
}

void TranslationCache::put(const std::string& source, const std::string& target) {
    std::lock_guard lock(mu_);
    map_[unicode::normalize(source)] = target;
}

std::size_t TranslationCache::size() const {
    std::lock_guard lock(mu_);
    return map_.size();
}

void TranslationCache::load(std::istream& in) {
    auto loaded = read_tsv_map(in);
    std::lock_guard lock(mu_);
    for (auto& [k, v] : loaded) map_[unicode::normalize(k)] = std::move(v);
}

void TranslationCache::save(std::ostream& out) const {
    std::lock_guard lock(mu_);
    write_tsv_map(out, map_);
}

std::string TranslationCache::file_name() const {
    return "translation-cache." + langs_.src + "-" + langs_.dst + ".tsv";
}

namespace {

class SteadyRateClock final : public RateClock {
public:
    time_point now() override { return std::chrono::steady_clock::now(); }
    void sleep_until(time_point t) override { std::this_thread::sleep_until(t); }
};

}  // namespace

RateClock& steady_rate_clock() {
    static SteadyRateClock clock;
    return clock;
}

RateLimiter::RateLimiter(double rate_per_sec, RateClock& clock) : clock_(clock) {
    if (!(rate_per_sec > 0) || !std::isfinite(rate_per_sec))
        throw InvalidArgument("rate_per_sec must be > 0");
    burst_ = static_cast<std::size_t>(std::ceil(rate_per_sec));
    window_ = std::chrono::nanoseconds(
        static_cast<std::int64_t>(std::ceil(1e9 * static_cast<double>(burst_) / rate_per_sec)));
}

void RateLimiter::acquire() {
    RateClock::time_point slot;
    {
        std::lock_guard lock(mu_);
        slot = clock_.now();
        if (slots_.size() >= burst_) slot = std::max(slot, slots_[slots_.size() - burst_] + window_);
        slots_.push_back(slot);
        if (slots_.size() > burst_) slots_.erase(slots_.begin());
    }
    if (slot > clock_.now()) clock_.sleep_until(slot);
}

void TranslateConfig::validate() const {
    if (batch_size < 1) throw InvalidArgument("batch_size must be >= 1");
    if (max_in_flight < 1) throw InvalidArgument("max_in_flight must be >= 1");
    if (!(rate_per_sec > 0)) throw InvalidArgument("rate_per_sec must be > 0");
    if (langs.src.empty() || langs.dst.empty()) throw InvalidArgument("languages must be set");
}

TranslateOutcome translate_entries(const std::vector<LexiconEntry>& entries,
                                   TranslatorBackend& backend, TranslationCache& cache,
                                   const TranslateConfig& cfg, const BatchCommit& on_commit,
                                   RateClock& clock) {
    cfg.validate();
    for (const auto& e : entries)
        if (e.state != State::Deduped)
            throw StageError("entry " + e.id + " is " + std::string(to_string(e.state)) +
                             ", expected deduped");

    TranslateOutcome outcome;

    std::vector<std::string> misses;
    std::unordered_set<std::string> seen;
    for (const auto& e : entries) {
        const std::string key = unicode::normalize(e.source_form);
        if (cache.get(key)) {
            ++outcome.cache_hits;
        } else if (seen.insert(key).second) {
            misses.push_back(key);
        }
    }

    const std::size_t batch_count = (misses.size() + cfg.batch_size - 1) / cfg.batch_size;
    outcome.batches = batch_count;

    RateLimiter limiter(cfg.rate_per_sec, clock);
    std::unordered_map<std::string, std::string> item_failures;
    std::mutex commit_mu;
    std::atomic<std::size_t> next_batch{0};
    std::atomic<bool> abort{false};
    std::size_t committed = 0;
    std::exception_ptr fatal;

    auto run_batch = [&](std::size_t b) {
        const auto first = misses.begin() + static_cast<std::ptrdiff_t>(b * cfg.batch_size);
        const auto last = misses.begin() +
                          static_cast<std::ptrdiff_t>(std::min(misses.size(), (b + 1) * cfg.batch_size));
        const std::vector<std::string> items(first, last);

        std::vector<std::optional<std::string>> got;
        auto backoff = std::chrono::duration_cast<std::chrono::nanoseconds>(cfg.initial_backoff);
        for (std::size_t attempt = 0;; ++attempt) {
            try {
                limiter.acquire();
                got = backend.translate_batch(items, cfg.langs);
                if (got.size() != items.size())
                    throw BackendUnavailable("backend returned misaligned batch");
                break;
            } catch (const RateLimitExceeded&) {
                if (attempt >= cfg.retries) throw BackendUnavailable("rate limited; retries exhausted");
            } catch (const BackendUnavailable&) {
                if (attempt >= cfg.retries) throw;
            }
            clock.sleep_until(clock.now() + backoff);
            backoff *= 2;
        }

        std::map<std::string, std::string> ok;
        std::lock_guard lock(commit_mu);
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (got[i] && !got[i]->empty()) {
                ok.emplace(items[i], *got[i]);
            } else {
                item_failures[items[i]] = got[i] ? "empty translation" : "backend returned no translation";
            }
        }
        for (const auto& [k, v] : ok) cache.put(k, v);
        if (on_commit) on_commit(ok);
        ++committed;
    };

    auto worker = [&] {
        for (;;) {
            if (abort.load()) return;
            const std::size_t b = next_batch.fetch_add(1);
            if (b >= batch_count) return;
            try {
                run_batch(b);
            } catch (...) {
                std::lock_guard lock(commit_mu);
                if (!fatal) fatal = std::current_exception();
                abort = true;
                return;
            }
        }
    };

    const std::size_t threads = std::min(cfg.max_in_flight, batch_count);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    if (fatal) {
        try {
            std::rethrow_exception(fatal);
        } catch (const BackendUnavailable& e) {
            throw BackendUnavailable(std::string(e.what()) + " (" + std::to_string(committed) +
                                     " of " + std::to_string(batch_count) +
                                     " batches committed; rerun to resume)");
        }
    }

    outcome.entries.reserve(entries.size());
    for (const auto& e : entries) {
        LexiconEntry out = e;
        const std::string key = unicode::normalize(e.source_form);
        if (auto t = cache.get(key)) {
            out.translation = std::move(*t);
            out.state = State::Translated;
        } else {
            auto it = item_failures.find(key);
            outcome.failures.push_back(
                {e.id, e.source_form, it == item_failures.end() ? "not translated" : it->second});
        }
        outcome.entries.push_back(std::move(out));
    }
    return outcome;
}

namespace {

const csv::Row kTranslatedHeader = {"id", "source_form", "tag", "frequency", "translation", "state"};

}  // namespace

std::string export_translated_csv(const std::vector<LexiconEntry>& entries) {
    std::ostringstream out;
    out << csv::format_row(kTranslatedHeader);
    for (const auto& e : entries) {
        if (stage_of(e.state) < Stage::Deduped)
            throw StageError("entry " + e.id + " has not been deduplicated");
        out << csv::format_row({e.id, e.source_form, e.tag, std::to_string(e.frequency),
                                e.translation.value_or(""), std::string(to_string(e.state))});
    }
    return out.str();
}

std::vector<LexiconEntry> import_translated_csv(std::istream& in) {
    csv::Reader reader(in);
    csv::expect_header(reader, kTranslatedHeader);
    std::vector<LexiconEntry> out;
    while (auto row = reader.next()) {
        const auto line = reader.line();
        if (row->size() != kTranslatedHeader.size())
            throw MalformedCsv(line, "expected 6 fields, got " + std::to_string(row->size()));
        LexiconEntry e;
        e.id = (*row)[0];
        e.source_form = (*row)[1];
        e.tag = (*row)[2];
        const auto& freq = (*row)[3];
        auto [p, ec] = std::from_chars(freq.data(), freq.data() + freq.size(), e.frequency);
        if (ec != std::errc() || p != freq.data() + freq.size() || e.frequency == 0)
            throw MalformedCsv(line, "bad frequency '" + freq + "'");
        auto state = parse_state((*row)[5]);
        if (!state) throw MalformedCsv(line, "unknown state '" + (*row)[5] + "'");
        e.state = *state;
        const bool translated = stage_of(e.state) >= Stage::Translated;
        if (translated != !(*row)[4].empty())
            throw MalformedCsv(line, "translation presence does not match state");
        if (translated) e.translation = (*row)[4];
        if (e.id != entry_id(e.source_form, e.tag)) throw MalformedCsv(line, "id does not match entry");
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace taglex
