#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "vaxkit/corpus.hpp"
#include "vaxkit/labels.hpp"
#include "vaxkit/prompt.hpp"
#include "vaxkit/runfile.hpp"

namespace vaxkit {

/// Chat-completion endpoint: takes a rendered prompt bundle, returns the
/// assistant text. Implementations throw AuthFailureError (terminal),
/// RateLimitedError / EndpointTimeoutError / EndpointError (transient).
class ChatEndpoint {
 public:
  virtual ~ChatEndpoint() = default;
  virtual std::string complete(const PromptBundle& bundle) = 0;
};

/// Any OpenAI-style HTTP service: POST {base_url}/v1/chat/completions with
/// system+user messages and decoding parameters, read
/// choices[0].message.content. The API key comes from VAXKIT_LLM_API_KEY
/// unless set explicitly.
class HttpChatEndpoint : public ChatEndpoint {
 public:
  struct Options {
    std::string base_url;             // e.g. "http://localhost:8085"
    std::string path = "/v1/chat/completions";
    std::optional<std::string> api_key;  // nullopt = read VAXKIT_LLM_API_KEY
    std::chrono::seconds timeout{30};
  };

  explicit HttpChatEndpoint(Options options);
  std::string complete(const PromptBundle& bundle) override;

 private:
  Options options_;
};

struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds initial_backoff{250};
  double multiplier = 2.0;
  std::chrono::milliseconds max_backoff{8000};
};

/// Stable cache key: fnv1a64 over model name, prompt texts, and decoding
/// parameters, in hex.
std::string prompt_cache_key(const PromptBundle& bundle);

/// Thread-safe raw-response cache keyed by prompt_cache_key. Optionally
/// persisted as one file per key under a directory.
class ResponseCache {
 public:
  ResponseCache() = default;
  explicit ResponseCache(std::filesystem::path dir);

  std::optional<std::string> get(const std::string& key);
  void put(const std::string& key, const std::string& raw);

 private:
  std::mutex mutex_;
  std::map<std::string, std::string> memory_;
  std::optional<std::filesystem::path> dir_;
};

struct LlmExchange {
  PromptBundle bundle;
  std::string raw_response;
  LabelSet parsed;
  std::chrono::milliseconds latency{0};
  int attempt_count = 0;  // 0 only for cache/replay hits
  bool cache_hit = false;
};

struct ClassifyOptions {
  RetryPolicy retry;
  ResponseCache* cache = nullptr;
  ParseMode parse_mode = ParseMode::lenient;
  /// Injection point so tests can skip real backoff sleeps.
  std::function<void(std::chrono::milliseconds)> sleeper;
};

/// Builds the prompt, consults the cache, calls the endpoint with retry and
/// exponential backoff, and parses the response.
LlmExchange classify(std::string_view tweet, ChatEndpoint& endpoint, const LabelMetaTable& metas,
                     const DecodingParams& params, std::string_view model_name,
                     const ClassifyOptions& options = {},
                     const PromptTemplate& tmpl = PromptTemplate::builtin());

struct TranscriptEntry {
  std::string tweet_id;
  std::string prompt_hash;
  std::string model_name;
  std::string raw_response;
  LabelSet parsed;
  int attempt_count = 0;
  bool cache_hit = false;
  std::int64_t latency_ms = 0;
  std::string timestamp;  // ISO-8601 UTC
};

/// JSONL transcript: one record per exchange. Append-only; doubles as the
/// resume/replay state for zero-shot runs.
namespace transcript {
std::vector<TranscriptEntry> load(const std::filesystem::path& path);
void append(const std::filesystem::path& path, const TranscriptEntry& entry);
}  // namespace transcript

struct ZeroShotRunOptions {
  std::string model_name = "gpt-3.5-turbo";
  DecodingParams params;
  LabelMetaTable metas = default_label_metas();
  PromptTemplate prompt_template = PromptTemplate::builtin();
  ParseMode parse_mode = ParseMode::lenient;
  RetryPolicy retry;
  int concurrency = 4;
  std::chrono::milliseconds min_request_interval{0};  // shared rate limiter
  std::optional<std::filesystem::path> transcript_path;  // record + resume
  std::optional<std::filesystem::path> replay_path;      // strict offline replay
  std::optional<std::filesystem::path> cache_dir;
  std::string run_tag = "zeroshot";
  std::function<void(std::chrono::milliseconds)> sleeper;
};

struct ZeroShotResult {
  RunFile run;
  std::vector<LlmExchange> exchanges;  // input order
  std::size_t served_from_transcript = 0;
};

/// Classifies every record (input order preserved in the run file).
/// `endpoint` may be null only when replaying. On failure the transcript
/// keeps every completed row so the run can resume.
ZeroShotResult run_zeroshot(const std::vector<TweetRecord>& records, ChatEndpoint* endpoint,
                            const ZeroShotRunOptions& options);

}  // namespace vaxkit
