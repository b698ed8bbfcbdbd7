#include "vaxkit/llm.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "vaxkit/errors.hpp"
#include "vaxkit/hashing.hpp"

namespace vaxkit {

namespace {

std::string now_utc_iso8601() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void default_sleep(std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }

}  // namespace

HttpChatEndpoint::HttpChatEndpoint(Options options) : options_(std::move(options)) {
  if (options_.base_url.empty()) throw ConfigError("endpoint base URL must be set");
  if (!options_.api_key) {
    if (const char* env = std::getenv("VAXKIT_LLM_API_KEY")) options_.api_key = env;
  }
}

std::string HttpChatEndpoint::complete(const PromptBundle& bundle) {
  httplib::Client client(options_.base_url);
  client.set_connection_timeout(options_.timeout.count(), 0);
  client.set_read_timeout(options_.timeout.count(), 0);

  nlohmann::json body = {
      {"model", bundle.model_name},
      {"messages",
       {{{"role", "system"}, {"content", bundle.system_text}},
        {{"role", "user"}, {"content", bundle.user_text}}}},
      {"temperature", bundle.params.temperature},
      {"max_tokens", bundle.params.max_tokens},
  };
  if (bundle.params.stop) body["stop"] = *bundle.params.stop;

  httplib::Headers headers;
  if (options_.api_key && !options_.api_key->empty()) {
    headers.emplace("Authorization", "Bearer " + *options_.api_key);
  }

  const auto result = client.Post(options_.path, headers, body.dump(), "application/json");
  if (!result) {
    const auto err = result.error();
    if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read ||
        err == httplib::Error::Write) {
      throw EndpointTimeoutError(httplib::to_string(err));
    }
    throw EndpointError("transport failure: " + httplib::to_string(err));
  }
  if (result->status == 401 || result->status == 403) {
    throw AuthFailureError("endpoint returned status " + std::to_string(result->status));
  }
  if (result->status == 429) {
    throw RateLimitedError("endpoint returned status 429");
  }
  if (result->status >= 500) {
    throw EndpointError("endpoint returned status " + std::to_string(result->status));
  }
  if (result->status != 200) {
    throw EndpointError("unexpected status " + std::to_string(result->status) + ": " +
                        result->body);
  }

  try {
    const auto json = nlohmann::json::parse(result->body);
    return json.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw EndpointError(std::string("malformed completion payload: ") + e.what());
  }
}

std::string prompt_cache_key(const PromptBundle& bundle) {
  std::string canonical = bundle.model_name;
  canonical += '\x1f';
  canonical += bundle.system_text;
  canonical += '\x1f';
  canonical += bundle.user_text;
  canonical += '\x1f';
  canonical += std::to_string(bundle.params.temperature);
  canonical += '\x1f';
  canonical += std::to_string(bundle.params.max_tokens);
  if (bundle.params.stop) {
    for (const auto& s : *bundle.params.stop) {
      canonical += '\x1f';
      canonical += s;
    }
  }
  return to_hex64(fnv1a64(canonical));
}

ResponseCache::ResponseCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(*dir_);
}

std::optional<std::string> ResponseCache::get(const std::string& key) {
  std::lock_guard<std::mutex> lock(mutex_);
  if (const auto it = memory_.find(key); it != memory_.end()) return it->second;
  if (dir_) {
    const auto path = *dir_ / (key + ".json");
    std::ifstream in(path, std::ios::binary);
    if (in) {
      try {
        nlohmann::json j;
        in >> j;
        auto raw = j.at("raw_response").get<std::string>();
        memory_[key] = raw;
        return raw;
      } catch (const nlohmann::json::exception&) {
        return std::nullopt;  // ignore corrupt cache entries
      }
    }
  }
  return std::nullopt;
}

void ResponseCache::put(const std::string& key, const std::string& raw) {
  std::lock_guard<std::mutex> lock(mutex_);
  memory_[key] = raw;
  if (dir_) {
    const nlohmann::json j = {{"key", key}, {"raw_response", raw}};
    const auto tmp = *dir_ / (key + ".json.tmp");
    const auto final_path = *dir_ / (key + ".json");
    std::ofstream out(tmp, std::ios::binary);
    out << j.dump() << '\n';
    out.close();
    std::error_code ec;
    std::filesystem::rename(tmp, final_path, ec);  // atomic within one filesystem
  }
}

LlmExchange classify(std::string_view tweet, ChatEndpoint& endpoint, const LabelMetaTable& metas,
                     const DecodingParams& params, std::string_view model_name,
                     const ClassifyOptions& options, const PromptTemplate& tmpl) {
  LlmExchange exchange;
  exchange.bundle = build_prompt(tweet, metas, params, model_name, tmpl);
  const std::string key = prompt_cache_key(exchange.bundle);

  if (options.cache) {
    if (auto cached = options.cache->get(key)) {
      exchange.raw_response = *cached;
      exchange.parsed = parse_response(exchange.raw_response, options.parse_mode);
      exchange.cache_hit = true;
      return exchange;
    }
  }

  const auto sleeper = options.sleeper ? options.sleeper : default_sleep;
  auto backoff = options.retry.initial_backoff;
  const auto start = std::chrono::steady_clock::now();
  for (int attempt = 1;; ++attempt) {
    exchange.attempt_count = attempt;
    try {
      exchange.raw_response = endpoint.complete(exchange.bundle);
      break;
    } catch (const AuthFailureError&) {
      throw;  // terminal, never retried
    } catch (const Error& e) {
      const bool transient = dynamic_cast<const RateLimitedError*>(&e) ||
                             dynamic_cast<const EndpointTimeoutError*>(&e) ||
                             dynamic_cast<const EndpointError*>(&e);
      if (!transient) throw;
      if (attempt >= options.retry.max_attempts) {
        throw RetriesExhaustedError(attempt, e.what());
      }
      sleeper(backoff);
      backoff = std::min(
          std::chrono::milliseconds(static_cast<std::int64_t>(
              static_cast<double>(backoff.count()) * options.retry.multiplier)),
          options.retry.max_backoff);
    }
  }
  exchange.latency = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  exchange.parsed = parse_response(exchange.raw_response, options.parse_mode);
  if (options.cache) options.cache->put(key, exchange.raw_response);
  return exchange;
}

namespace transcript {

std::vector<TranscriptEntry> load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileUnreadableError(path.string());
  std::vector<TranscriptEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
      TranscriptEntry e;
      e.tweet_id = j.at("tweet_id").get<std::string>();
      e.prompt_hash = j.at("prompt_hash").get<std::string>();
      e.model_name = j.at("model_name").get<std::string>();
      e.raw_response = j.at("raw_response").get<std::string>();
      e.parsed = parse_label_string(j.at("parsed").get<std::string>(), " ");
      e.attempt_count = j.at("attempt_count").get<int>();
      e.cache_hit = j.value("cache_hit", false);
      e.latency_ms = j.value("latency_ms", std::int64_t{0});
      e.timestamp = j.value("timestamp", std::string{});
      entries.push_back(std::move(e));
    } catch (const std::exception& e) {
      throw MalformedRowError(line_no, std::string("bad transcript record: ") + e.what());
    }
  }
  return entries;
}

void append(const std::filesystem::path& path, const TranscriptEntry& entry) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw IoFailureError("cannot append to transcript: " + path.string());
  const nlohmann::json j = {
      {"tweet_id", entry.tweet_id},
      {"prompt_hash", entry.prompt_hash},
      {"model_name", entry.model_name},
      {"raw_response", entry.raw_response},
      {"parsed", serialize_label_set(entry.parsed, " ")},
      {"attempt_count", entry.attempt_count},
      {"cache_hit", entry.cache_hit},
      {"latency_ms", entry.latency_ms},
      {"timestamp", entry.timestamp},
  };
  out << j.dump() << '\n';
  out.flush();
  if (!out) throw IoFailureError("transcript append failed: " + path.string());
}

}  // namespace transcript

namespace {

/// Spaces out request starts so at most one begins per min_request_interval.
class RateLimiter {
 public:
  RateLimiter(std::chrono::milliseconds interval,
              std::function<void(std::chrono::milliseconds)> sleeper)
      : interval_(interval), sleeper_(std::move(sleeper)) {}

  void acquire() {
    if (interval_.count() <= 0) return;
    std::chrono::steady_clock::time_point wait_until;
    {
      std::lock_guard<std::mutex> lock(mutex_);
      const auto now = std::chrono::steady_clock::now();
      next_ = std::max(next_, now);
      wait_until = next_;
      next_ += interval_;
    }
    const auto now = std::chrono::steady_clock::now();
    if (wait_until > now) {
      sleeper_(std::chrono::duration_cast<std::chrono::milliseconds>(wait_until - now));
    }
  }

 private:
  std::chrono::milliseconds interval_;
  std::function<void(std::chrono::milliseconds)> sleeper_;
  std::mutex mutex_;
  std::chrono::steady_clock::time_point next_{};
};

}  // namespace

ZeroShotResult run_zeroshot(const std::vector<TweetRecord>& records, ChatEndpoint* endpoint,
                            const ZeroShotRunOptions& options) {
  options.params.validate();
  if (options.concurrency < 1) throw ConfigError("concurrency must be >= 1");
  if (options.replay_path && options.transcript_path) {
    throw ConfigError("--replay and --transcript are mutually exclusive");
  }
  if (!options.replay_path && endpoint == nullptr) {
    throw ConfigError("an endpoint is required unless replaying a transcript");
  }

  // Known responses keyed by prompt hash: the replay file (strict) or an
  // existing transcript (resume).
  std::map<std::string, TranscriptEntry> known;
  if (options.replay_path) {
    for (auto& e : transcript::load(*options.replay_path)) {
      known.emplace(e.prompt_hash, std::move(e));
    }
  } else if (options.transcript_path && std::filesystem::exists(*options.transcript_path)) {
    for (auto& e : transcript::load(*options.transcript_path)) {
      known.emplace(e.prompt_hash, std::move(e));
    }
  }

  std::optional<ResponseCache> cache;
  if (options.cache_dir) cache.emplace(*options.cache_dir);

  ZeroShotResult result;
  result.run.method_tag = options.run_tag;
  result.exchanges.resize(records.size());

  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto& exchange = result.exchanges[i];
    exchange.bundle = build_prompt(records[i].text, options.metas, options.params,
                                   options.model_name, options.prompt_template);
    const std::string key = prompt_cache_key(exchange.bundle);
    if (const auto it = known.find(key); it != known.end()) {
      exchange.raw_response = it->second.raw_response;
      exchange.parsed = parse_response(exchange.raw_response, options.parse_mode);
      exchange.cache_hit = true;
      ++result.served_from_transcript;
    } else if (options.replay_path) {
      throw ReplayMissError("no transcript entry for tweet id \"" + records[i].id + "\"");
    } else {
      pending.push_back(i);
    }
  }

  if (!pending.empty()) {
    const auto sleeper = options.sleeper ? options.sleeper : default_sleep;
    RateLimiter limiter(options.min_request_interval, sleeper);
    std::mutex transcript_mutex;
    std::atomic<std::size_t> cursor{0};
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    std::string failed_id;

    auto worker = [&]() {
      while (!failed.load()) {
        const std::size_t slot = cursor.fetch_add(1);
        if (slot >= pending.size()) return;
        const std::size_t idx = pending[slot];
        try {
          limiter.acquire();
          ClassifyOptions copts;
          copts.retry = options.retry;
          copts.parse_mode = options.parse_mode;
          copts.cache = cache ? &*cache : nullptr;
          copts.sleeper = options.sleeper;
          result.exchanges[idx] =
              classify(records[idx].text, *endpoint, options.metas, options.params,
                       options.model_name, copts, options.prompt_template);
          if (options.transcript_path) {
            TranscriptEntry entry;
            entry.tweet_id = records[idx].id;
            entry.prompt_hash = prompt_cache_key(result.exchanges[idx].bundle);
            entry.model_name = options.model_name;
            entry.raw_response = result.exchanges[idx].raw_response;
            entry.parsed = result.exchanges[idx].parsed;
            entry.attempt_count = result.exchanges[idx].attempt_count;
            entry.cache_hit = result.exchanges[idx].cache_hit;
            entry.latency_ms = result.exchanges[idx].latency.count();
            entry.timestamp = now_utc_iso8601();
            std::lock_guard<std::mutex> lock(transcript_mutex);
            transcript::append(*options.transcript_path, entry);
          }
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) {
            first_error = std::current_exception();
            failed_id = records[idx].id;
          }
          failed.store(true);
          return;
        }
      }
    };

    const std::size_t thread_count =
        std::min<std::size_t>(static_cast<std::size_t>(options.concurrency), pending.size());
    std::vector<std::thread> threads;
    threads.reserve(thread_count);
    for (std::size_t t = 0; t < thread_count; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();

    if (first_error) {
      try {
        std::rethrow_exception(first_error);
      } catch (const RetriesExhaustedError& e) {
        throw RetriesExhaustedError(e.attempts,
                                    e.last_cause + " (while classifying tweet id \"" +
                                        failed_id + "\")");
      }
    }
  }

  for (std::size_t i = 0; i < records.size(); ++i) {
    result.run.rows.emplace_back(records[i].id, result.exchanges[i].parsed);
  }
  return result;
}

}  // namespace vaxkit
