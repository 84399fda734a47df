#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace adg {

// Exit-code buckets used by the CLI: input errors (2), validation
// errors (3), numerical failures (4).
enum class ErrorCategory { input = 2, validation = 3, numerical = 4 };

class Error : public std::runtime_error {
public:
  Error(ErrorCategory category, std::string kind, const std::string& message)
      : std::runtime_error(message), category_(category), kind_(std::move(kind)) {}

  ErrorCategory category() const noexcept { return category_; }
  const std::string& kind() const noexcept { return kind_; }

private:
  ErrorCategory category_;
  std::string kind_;
};

struct ParseError : Error {
  explicit ParseError(const std::string& msg) : Error(ErrorCategory::input, "ParseError", msg) {}
};

struct IoError : Error {
  explicit IoError(const std::string& msg) : Error(ErrorCategory::input, "IoError", msg) {}
};

struct NonManifoldError : Error {
  explicit NonManifoldError(const std::string& msg)
      : Error(ErrorCategory::validation, "NonManifoldError", msg) {}
};

struct DegenerateFaceError : Error {
  explicit DegenerateFaceError(const std::string& msg)
      : Error(ErrorCategory::validation, "DegenerateFaceError", msg) {}
};

struct SingularTransformError : Error {
  explicit SingularTransformError(const std::string& msg)
      : Error(ErrorCategory::validation, "SingularTransformError", msg) {}
};

struct DegenerateTriangleError : Error {
  explicit DegenerateTriangleError(const std::string& msg)
      : Error(ErrorCategory::validation, "DegenerateTriangleError", msg) {}
};

struct InsufficientPointsError : Error {
  explicit InsufficientPointsError(const std::string& msg)
      : Error(ErrorCategory::validation, "InsufficientPointsError", msg) {}
};

struct SingularMetricError : Error {
  explicit SingularMetricError(const std::string& msg)
      : Error(ErrorCategory::numerical, "SingularMetricError", msg) {}
};

struct FactorizationError : Error {
  explicit FactorizationError(const std::string& msg)
      : Error(ErrorCategory::numerical, "FactorizationError", msg) {}
};

struct ConvergenceError : Error {
  explicit ConvergenceError(const std::string& msg)
      : Error(ErrorCategory::numerical, "ConvergenceError", msg) {}
};

struct DisconnectedError : Error {
  explicit DisconnectedError(const std::string& msg)
      : Error(ErrorCategory::validation, "DisconnectedError", msg) {}
};

struct InsufficientDataError : Error {
  explicit InsufficientDataError(const std::string& msg)
      : Error(ErrorCategory::validation, "InsufficientDataError", msg) {}
};

struct DimensionMismatchError : Error {
  explicit DimensionMismatchError(const std::string& msg)
      : Error(ErrorCategory::validation, "DimensionMismatchError", msg) {}
};

struct NoRelevantError : Error {
  explicit NoRelevantError(const std::string& msg)
      : Error(ErrorCategory::validation, "NoRelevantError", msg) {}
};

struct InvalidCorrespondenceError : Error {
  explicit InvalidCorrespondenceError(const std::string& msg)
      : Error(ErrorCategory::validation, "InvalidCorrespondenceError", msg) {}
};

struct SizeCapError : Error {
  explicit SizeCapError(const std::string& msg)
      : Error(ErrorCategory::validation, "SizeCapError", msg) {}
};

struct InvalidMetricError : Error {
  explicit InvalidMetricError(const std::string& msg)
      : Error(ErrorCategory::validation, "InvalidMetricError", msg) {}
};

struct InvalidArgumentError : Error {
  explicit InvalidArgumentError(const std::string& msg)
      : Error(ErrorCategory::validation, "InvalidArgumentError", msg) {}
};

}  // namespace adg
