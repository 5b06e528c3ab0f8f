#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hevo {

enum class ErrorCode {
  invalid_argument,
  invalid_config,
  worker_timeout,
  agent_timeout,
  protocol_error,
  trace_invalid,
  report_invalid,
  harness_invalid,
  blueprint_invalid,
  unsupported_criterion,
  resume_mismatch,
  empty_aggregate,
  train_test_overlap,
  io_error,
};

std::string_view to_string(ErrorCode code);

// All engine failures surface as hevo::Error carrying a stable code; callers
// (the CLI in particular) map codes to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

  // Same code, message prefixed with extra context such as "iteration 3".
  Error annotated(std::string_view context) const {
    return Error(code_, std::string(context) + ": " + detail_);
  }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace hevo
