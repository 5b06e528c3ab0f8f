#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <sys/types.h>

namespace hevo {

// Child process with piped stdin/stdout; stderr is inherited. The child is
// killed and reaped on destruction.
class Subprocess {
 public:
  Subprocess(const std::string& command, const std::vector<std::string>& args);
  ~Subprocess();
  Subprocess(const Subprocess&) = delete;
  Subprocess& operator=(const Subprocess&) = delete;

  // Writes line + '\n'. Throws Error(protocol_error) if the child is gone.
  void write_line(std::string_view line);

  // Next line without its newline, or nullopt once the deadline passes.
  // Throws Error(protocol_error) on end of stream.
  std::optional<std::string> read_line(std::chrono::steady_clock::time_point deadline);

  void kill();
  pid_t pid() const { return pid_; }

 private:
  pid_t pid_ = -1;
  int stdin_fd_ = -1;
  int stdout_fd_ = -1;
  std::string buffer_;
};

}  // namespace hevo
