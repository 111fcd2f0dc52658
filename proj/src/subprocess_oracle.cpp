#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstring>
#include <mutex>
#include <string>

#include "transport/json_io.hpp"
#include "transport/oracle.hpp"

namespace transport {

struct SubprocessOracle::Impl {
  std::string command;
  int timeout_ms;
  int retries;
  std::mutex mutex;

  pid_t child = -1;
  int to_child = -1;
  int from_child = -1;
  std::string buffer;

  explicit Impl(std::string cmd, int timeout, int tries)
      : command(std::move(cmd)), timeout_ms(timeout), retries(tries) {}

  ~Impl() { stop(); }

  void stop() {
    if (to_child >= 0) close(to_child);
    if (from_child >= 0) close(from_child);
    to_child = from_child = -1;
    if (child > 0) {
      // The child runs in its own process group; kill the group so that
      // grandchildren spawned by the shell do not outlive it.
      kill(-child, SIGKILL);
      int status = 0;
      waitpid(child, &status, 0);
      child = -1;
    }
    buffer.clear();
  }

  void start() {
    int in_pipe[2], out_pipe[2];
    if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0) {
      throw OracleError("subprocess oracle: pipe() failed");
    }
    pid_t pid = fork();
    if (pid < 0) throw OracleError("subprocess oracle: fork() failed");
    if (pid == 0) {
      setpgid(0, 0);
      dup2(in_pipe[0], STDIN_FILENO);
      dup2(out_pipe[1], STDOUT_FILENO);
      close(in_pipe[0]);
      close(in_pipe[1]);
      close(out_pipe[0]);
      close(out_pipe[1]);
      execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
      _exit(127);
    }
    child = pid;
    to_child = in_pipe[1];
    from_child = out_pipe[0];
    close(in_pipe[0]);
    close(out_pipe[1]);
  }

  std::string round_trip(const std::string& request) {
    if (child <= 0) start();
    std::string line = request;
    line.push_back('\n');
    std::size_t written = 0;
    while (written < line.size()) {
      ssize_t n = write(to_child, line.data() + written, line.size() - written);
      if (n <= 0) throw OracleError("subprocess oracle: write to child failed");
      written += static_cast<std::size_t>(n);
    }
    while (true) {
      auto newline = buffer.find('\n');
      if (newline != std::string::npos) {
        std::string response = buffer.substr(0, newline);
        buffer.erase(0, newline + 1);
        return response;
      }
      struct pollfd pfd{from_child, POLLIN, 0};
      int ready = poll(&pfd, 1, timeout_ms);
      if (ready <= 0) throw OracleError("subprocess oracle: timed out waiting for a response");
      char chunk[4096];
      ssize_t n = read(from_child, chunk, sizeof(chunk));
      if (n <= 0) throw OracleError("subprocess oracle: child closed its output");
      buffer.append(chunk, static_cast<std::size_t>(n));
    }
  }
};

SubprocessOracle::SubprocessOracle(std::string command, int timeout_ms, int retries)
    : impl_(std::make_unique<Impl>(std::move(command), timeout_ms, retries)) {}

SubprocessOracle::~SubprocessOracle() = default;

DiscreteMeasure SubprocessOracle::apply(const DiscreteMeasure& mu) {
  std::lock_guard<std::mutex> lock(impl_->mutex);
  std::string request = measure_to_json(mu).dump();
  std::string last_error;
  for (int attempt = 0; attempt <= impl_->retries; ++attempt) {
    try {
      std::string response = impl_->round_trip(request);
      return measure_from_json(parse_json(response));
    } catch (const OracleError& e) {
      last_error = e.what();
      impl_->stop();  // restart before the next attempt
    } catch (const ValidationError& e) {
      throw OracleError(std::string("subprocess oracle returned a bad measure: ") + e.what());
    }
  }
  throw OracleError("subprocess oracle failed after retries: " + last_error);
}

MeasureMapOracle SubprocessOracle::make(std::string command, int timeout_ms, int retries) {
  auto shared = std::make_shared<SubprocessOracle>(std::move(command), timeout_ms, retries);
  MeasureMapOracle oracle;
  oracle.name = "subprocess";
  oracle.pure = false;
  oracle.apply = [shared](const DiscreteMeasure& mu) { return shared->apply(mu); };
  return oracle;
}

}  // namespace transport
