#ifndef ELICIT_ERRORS_HPP
#define ELICIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace elicit {

enum class ErrorCode {
  NotAssessable,
  InsufficientStructure,
  InsufficientData,
  InvalidJudgements,
  InvalidTransition,
  UnsupportedVersion,
  ParseError,
};

const char* to_string(ErrorCode code);

// Domain errors (bad probabilities, non-finite arguments) use std::domain_error;
// everything a caller is expected to branch on carries an ErrorCode.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message) : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(std::string location, const std::string& message)
      : Error(ErrorCode::ParseError, location.empty() ? message : location + ": " + message),
        location_(std::move(location)) {}

  const std::string& location() const noexcept { return location_; }

 private:
  std::string location_;
};

}  // namespace elicit

#endif  // ELICIT_ERRORS_HPP
