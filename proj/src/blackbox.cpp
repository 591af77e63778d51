#include "sslhs/blackbox.hpp"

#include <cctype>
#include <cerrno>
#include <charconv>
#include <chrono>
#include <cmath>
#include <csignal>
#include <cstring>
#include <thread>
#include <sys/wait.h>
#include <unistd.h>

#include "sslhs/errors.hpp"
#include "sslhs/model.hpp"

namespace sslhs {

std::string format_request(std::span<const double> point) {
  std::string line;
  char buf[32];
  for (std::size_t k = 0; k < point.size(); ++k) {
    if (k) line.push_back(' ');
    const auto res = std::to_chars(buf, buf + sizeof buf, point[k]);
    line.append(buf, res.ptr);
  }
  return line;
}

bool parse_response(const std::string& line, double& value) {
  const char* begin = line.data();
  const char* end = line.data() + line.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(*begin))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(end[-1]))) --end;
  if (begin == end) return false;
  if (*begin == '+') ++begin;
  const auto res = std::from_chars(begin, end, value);
  return res.ec == std::errc() && res.ptr == end;
}

BlackBoxProcess::BlackBoxProcess(std::string command) : command_(std::move(command)) {
  // A dead child must surface as a write error, not terminate us.
  std::signal(SIGPIPE, SIG_IGN);
  int in_pipe[2];
  int out_pipe[2];
  if (pipe(in_pipe) != 0) throw ModelError(std::string("pipe failed: ") + std::strerror(errno));
  if (pipe(out_pipe) != 0) {
    close(in_pipe[0]);
    close(in_pipe[1]);
    throw ModelError(std::string("pipe failed: ") + std::strerror(errno));
  }
  pid_ = fork();
  if (pid_ < 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) close(fd);
    throw ModelError(std::string("fork failed: ") + std::strerror(errno));
  }
  if (pid_ == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) close(fd);
    execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  to_child_ = fdopen(in_pipe[1], "w");
  from_child_ = fdopen(out_pipe[0], "r");
  if (!to_child_ || !from_child_) throw ModelError("fdopen failed for black-box pipes");
}

BlackBoxProcess::~BlackBoxProcess() {
  if (to_child_) std::fclose(to_child_);
  if (from_child_) std::fclose(from_child_);
  if (pid_ <= 0) return;
  // Closing stdin asks the child to finish; give it a moment before killing.
  int status = 0;
  for (int i = 0; i < 50; ++i) {
    if (waitpid(pid_, &status, WNOHANG) == pid_) return;
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  kill(pid_, SIGKILL);
  waitpid(pid_, &status, 0);
}

double BlackBoxProcess::evaluate(std::span<const double> point) {
  std::lock_guard lock(mutex_);
  const std::string request = format_request(point) + "\n";
  if (std::fputs(request.c_str(), to_child_) == EOF || std::fflush(to_child_) != 0) {
    throw ModelError("black-box process '" + command_ + "' is not accepting input at " +
                     format_point(point));
  }
  std::string line;
  for (int ch; (ch = std::fgetc(from_child_)) != EOF;) {
    if (ch == '\n') break;
    line.push_back(static_cast<char>(ch));
  }
  if (line.empty() && std::feof(from_child_)) {
    throw ModelError("black-box process '" + command_ + "' exited before answering " +
                     format_point(point));
  }
  double value = 0.0;
  if (!parse_response(line, value)) {
    throw ModelError("malformed black-box response '" + line + "' at " + format_point(point));
  }
  if (!std::isfinite(value)) {
    throw ModelError("non-finite black-box response '" + line + "' at " + format_point(point));
  }
  return value;
}

}  // namespace sslhs
