#pragma once

#include <cstdio>
#include <mutex>
#include <span>
#include <string>
#include <sys/types.h>

namespace sslhs {

/// Child process evaluating the model over a line protocol on its standard
/// streams: each request is the point's d coordinates as space-separated
/// decimals plus a newline; each response is one decimal real plus a newline.
/// The child is started once and kept alive; calls are serialised.
class BlackBoxProcess {
 public:
  /// Starts `/bin/sh -c command`. Throws ModelError if it cannot be spawned.
  explicit BlackBoxProcess(std::string command);
  ~BlackBoxProcess();

  BlackBoxProcess(const BlackBoxProcess&) = delete;
  BlackBoxProcess& operator=(const BlackBoxProcess&) = delete;

  /// Throws ModelError on process exit, malformed or non-finite responses;
  /// the message carries the point and the raw response.
  double evaluate(std::span<const double> point);

  const std::string& command() const { return command_; }

 private:
  std::string command_;
  pid_t pid_ = -1;
  std::FILE* to_child_ = nullptr;
  std::FILE* from_child_ = nullptr;
  std::mutex mutex_;
};

/// Request line for `point` (without the trailing newline); shortest
/// round-trip decimal formatting.
std::string format_request(std::span<const double> point);

/// Parses one response line. Returns false unless the whole line (modulo
/// surrounding whitespace) is a decimal real.
bool parse_response(const std::string& line, double& value);

}  // namespace sslhs
