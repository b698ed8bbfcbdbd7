#include "vaxkit/errors.hpp"

#include <sstream>

namespace vaxkit {

namespace {

std::string join(const std::vector<std::string>& items, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::string at_line(std::size_t line) {
  return line ? " (line " + std::to_string(line) + ")" : "";
}

}  // namespace

UnknownLabelError::UnknownLabelError(std::string token_, std::size_t line_)
    : Error("unknown label token \"" + token_ + "\"" + at_line(line_)),
      token(std::move(token_)),
      line(line_) {}

EmptyLabelStringError::EmptyLabelStringError()
    : Error("label string is empty or whitespace") {}

FileUnreadableError::FileUnreadableError(const std::string& path)
    : Error("cannot read file: " + path) {}

MalformedRowError::MalformedRowError(std::size_t line_, const std::string& detail)
    : Error("malformed row at line " + std::to_string(line_) + ": " + detail), line(line_) {}

DuplicateIdError::DuplicateIdError(std::string id_, std::size_t line_)
    : Error("duplicate id \"" + id_ + "\"" + at_line(line_)), id(std::move(id_)), line(line_) {}

MissingGoldError::MissingGoldError(std::string id_)
    : Error("record \"" + id_ + "\" has no gold labels"), id(std::move(id_)) {}

DimensionMismatchError::DimensionMismatchError(std::size_t expected, std::size_t got)
    : Error("embedding dimension mismatch: expected " + std::to_string(expected) + ", got " +
            std::to_string(got)) {}

BackendUnavailableError::BackendUnavailableError(const std::string& detail)
    : Error("encoder backend unavailable: " + detail) {}

TokenizationFailureError::TokenizationFailureError(const std::string& detail)
    : Error("tokenization failed: " + detail) {}

NonFiniteLossError::NonFiniteLossError(int epoch_, std::size_t step_)
    : Error("non-finite training loss at epoch " + std::to_string(epoch_) + ", step " +
            std::to_string(step_)),
      epoch(epoch_),
      step(step_) {}

IoFailureError::IoFailureError(const std::string& detail) : Error("i/o failure: " + detail) {}

ChecksumMismatchError::ChecksumMismatchError(const std::string& detail)
    : Error("checkpoint corrupt: " + detail) {}

VersionMismatchError::VersionMismatchError(unsigned expected, unsigned got)
    : Error("checkpoint version mismatch: supported " + std::to_string(expected) + ", file has " +
            std::to_string(got)) {}

AuthFailureError::AuthFailureError(const std::string& detail)
    : Error("authentication failed: " + detail) {}

RateLimitedError::RateLimitedError(const std::string& detail) : Error("rate limited: " + detail) {}

EndpointTimeoutError::EndpointTimeoutError(const std::string& detail)
    : Error("endpoint timeout: " + detail) {}

EndpointError::EndpointError(const std::string& detail) : Error("endpoint error: " + detail) {}

RetriesExhaustedError::RetriesExhaustedError(int attempts_, const std::string& last_cause_)
    : Error("retries exhausted after " + std::to_string(attempts_) + " attempts; last cause: " +
            last_cause_),
      attempts(attempts_),
      last_cause(last_cause_) {}

ReplayMissError::ReplayMissError(const std::string& detail)
    : Error("replay transcript miss: " + detail) {}

EmptyEvaluationError::EmptyEvaluationError() : Error("no prediction pairs to evaluate") {}

IdMismatchError::IdMismatchError(std::vector<std::string> missing_, std::vector<std::string> extra_)
    : Error("run/gold id mismatch; missing from run: [" + join(missing_, ", ") +
            "], extra in run: [" + join(extra_, ", ") + "]"),
      missing(std::move(missing_)),
      extra(std::move(extra_)) {}

InvariantViolationError::InvariantViolationError(const std::string& what,
                                                 std::vector<std::string> offending_ids_)
    : Error(what + "; offending ids: [" + join(offending_ids_, ", ") + "]"),
      offending_ids(std::move(offending_ids_)) {}

}  // namespace vaxkit
