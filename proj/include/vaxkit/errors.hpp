#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace vaxkit {

/// Base class for every error thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---- label / parsing errors ------------------------------------------------

class UnknownLabelError : public Error {
 public:
  UnknownLabelError(std::string token, std::size_t line = 0);
  std::string token;
  std::size_t line;  // 1-based file line, 0 when not file-bound
};

class EmptyLabelStringError : public Error {
 public:
  EmptyLabelStringError();
};

// ---- corpus / file errors --------------------------------------------------

class FileUnreadableError : public Error {
 public:
  explicit FileUnreadableError(const std::string& path);
};

class MalformedRowError : public Error {
 public:
  MalformedRowError(std::size_t line, const std::string& detail);
  std::size_t line;
};

class DuplicateIdError : public Error {
 public:
  explicit DuplicateIdError(std::string id, std::size_t line = 0);
  std::string id;
  std::size_t line;
};

class MissingGoldError : public Error {
 public:
  explicit MissingGoldError(std::string id);
  std::string id;
};

// ---- classifier errors -----------------------------------------------------

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  DimensionMismatchError(std::size_t expected, std::size_t got);
};

class BackendUnavailableError : public Error {
 public:
  explicit BackendUnavailableError(const std::string& detail);
};

class TokenizationFailureError : public Error {
 public:
  explicit TokenizationFailureError(const std::string& detail);
};

class NonFiniteLossError : public Error {
 public:
  NonFiniteLossError(int epoch, std::size_t step);
  int epoch;
  std::size_t step;
};

// ---- checkpoint errors -----------------------------------------------------

class IoFailureError : public Error {
 public:
  explicit IoFailureError(const std::string& detail);
};

class ChecksumMismatchError : public Error {
 public:
  explicit ChecksumMismatchError(const std::string& detail);
};

class VersionMismatchError : public Error {
 public:
  VersionMismatchError(unsigned expected, unsigned got);
};

// ---- chat endpoint errors --------------------------------------------------

class AuthFailureError : public Error {
 public:
  explicit AuthFailureError(const std::string& detail);
};

/// Transient: request was throttled, caller may retry.
class RateLimitedError : public Error {
 public:
  explicit RateLimitedError(const std::string& detail);
};

/// Transient: request timed out, caller may retry.
class EndpointTimeoutError : public Error {
 public:
  explicit EndpointTimeoutError(const std::string& detail);
};

/// Transient transport or server-side failure (5xx, connect error).
class EndpointError : public Error {
 public:
  explicit EndpointError(const std::string& detail);
};

class RetriesExhaustedError : public Error {
 public:
  RetriesExhaustedError(int attempts, const std::string& last_cause);
  int attempts;
  std::string last_cause;
};

class ReplayMissError : public Error {
 public:
  explicit ReplayMissError(const std::string& detail);
};

// ---- evaluation errors -----------------------------------------------------

class EmptyEvaluationError : public Error {
 public:
  EmptyEvaluationError();
};

class IdMismatchError : public Error {
 public:
  IdMismatchError(std::vector<std::string> missing, std::vector<std::string> extra);
  std::vector<std::string> missing;  // in gold, absent from run
  std::vector<std::string> extra;    // in run, absent from gold
};

class InvariantViolationError : public Error {
 public:
  InvariantViolationError(const std::string& what, std::vector<std::string> offending_ids);
  std::vector<std::string> offending_ids;
};

}  // namespace vaxkit
