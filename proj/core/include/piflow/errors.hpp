#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace piflow {

// Base class for all library errors. Every error carries a stable kebab-case
// code so callers can dispatch without string-matching free-form messages.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define PIFLOW_DEFINE_ERROR(ClassName, code_literal)            \
  class ClassName : public Error {                              \
   public:                                                      \
    explicit ClassName(const std::string& what)                 \
        : Error(code_literal, what) {}                          \
  };

// Principle store
PIFLOW_DEFINE_ERROR(UnknownPrincipleError, "unknown-principle")
PIFLOW_DEFINE_ERROR(NonMonotoneStepError, "non-monotone-step")
PIFLOW_DEFINE_ERROR(NonFiniteOutcomeError, "non-finite-outcome")
PIFLOW_DEFINE_ERROR(InvalidPrincipleError, "invalid-principle")
PIFLOW_DEFINE_ERROR(IoFailureError, "io-failure")

// Embedding
PIFLOW_DEFINE_ERROR(ProviderUnavailableError, "provider-unavailable")
PIFLOW_DEFINE_ERROR(EmptyContentError, "empty-content")
PIFLOW_DEFINE_ERROR(DimensionMismatchError, "dimension-mismatch")

// Scorer
PIFLOW_DEFINE_ERROR(EmptyGroupsError, "empty-groups")
PIFLOW_DEFINE_ERROR(MissingEmbeddingError, "missing-embedding")
PIFLOW_DEFINE_ERROR(LengthMismatchError, "length-mismatch")
PIFLOW_DEFINE_ERROR(LambdaOutOfRangeError, "lambda-out-of-range")

// Decision
PIFLOW_DEFINE_ERROR(InvalidConfigError, "invalid-config")

// Metrics
PIFLOW_DEFINE_ERROR(EmptyOutcomesError, "empty-outcomes")
PIFLOW_DEFINE_ERROR(NonPositiveReferenceError, "non-positive-reference")
PIFLOW_DEFINE_ERROR(FewerThanTwoPointsError, "fewer-than-two-points")
PIFLOW_DEFINE_ERROR(FewerThanThreePointsError, "fewer-than-three-points")
PIFLOW_DEFINE_ERROR(NonPositiveValuesError, "non-positive-values")
PIFLOW_DEFINE_ERROR(UndefinedCorrelationError, "undefined-correlation")

// Tasks
PIFLOW_DEFINE_ERROR(UnknownCandidateIdError, "unknown-candidate-id")

// Agents / LLM client
PIFLOW_DEFINE_ERROR(ExhaustedCatalogError, "exhausted-catalog")
PIFLOW_DEFINE_ERROR(EndpointUnavailableError, "endpoint-unavailable")
PIFLOW_DEFINE_ERROR(UnparsableReplyError, "unparsable-reply-after-retries")
PIFLOW_DEFINE_ERROR(CandidateViolatesSpaceError, "candidate-violates-space")

// Orchestrator / CLI
PIFLOW_DEFINE_ERROR(UnknownTaskError, "unknown-task")
PIFLOW_DEFINE_ERROR(UnknownPolicyError, "unknown-policy")
PIFLOW_DEFINE_ERROR(UnknownTagError, "unknown-tag")
PIFLOW_DEFINE_ERROR(InvalidGridFieldError, "invalid-grid-field")

#undef PIFLOW_DEFINE_ERROR

// Pool/run file parse failure; remembers which line was bad (1-based).
class MalformedRecordError : public Error {
 public:
  MalformedRecordError(const std::string& what, std::size_t line)
      : Error("malformed-record",
              what + " (line " + std::to_string(line) + ")"),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Chemical-formula parse failure; remembers the byte offset of the problem.
class FormulaParseError : public Error {
 public:
  FormulaParseError(const std::string& what, std::size_t offset)
      : Error("parse-error",
              what + " (offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Continuous candidate outside the parameter box; remembers the dimension.
class InvalidCandidateError : public Error {
 public:
  InvalidCandidateError(const std::string& what, std::string dim)
      : Error("invalid-candidate", what), dim_(std::move(dim)) {}

  const std::string& dim() const noexcept { return dim_; }

 private:
  std::string dim_;
};

}  // namespace piflow
