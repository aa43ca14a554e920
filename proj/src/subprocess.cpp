// Copyright 2026 The lmtkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lmtkit/subprocess.hpp"

#include <cerrno>
#include <csignal>
#include <cstring>
#include <mutex>

#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include "lmtkit/error.hpp"

extern char** environ;

namespace lmt {

namespace {

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { std::signal(SIGPIPE, SIG_IGN); });
}

[[noreturn]] void fail(const std::string& what) {
  throw Error(ErrorCode::kIoError, what + ": " + std::strerror(errno));
}

}  // namespace

LineProcess::LineProcess(const std::string& command) : command_(command) {
  ignore_sigpipe();
  int in_pipe[2];
  int out_pipe[2];
  if (::pipe(in_pipe) != 0) fail("pipe");
  if (::pipe(out_pipe) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    fail("pipe");
  }

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);
  posix_spawn_file_actions_addclose(&actions, in_pipe[1]);
  posix_spawn_file_actions_addclose(&actions, out_pipe[0]);

  std::string sh = "/bin/sh";
  std::string flag = "-c";
  char* argv[] = {sh.data(), flag.data(), command_.data(), nullptr};
  const int rc = posix_spawn(&pid_, "/bin/sh", &actions, nullptr, argv, environ);
  posix_spawn_file_actions_destroy(&actions);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  if (rc != 0) {
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    errno = rc;
    fail("cannot spawn '" + command_ + "'");
  }
  to_child_ = in_pipe[1];
  from_child_ = ::fdopen(out_pipe[0], "r");
  if (from_child_ == nullptr) {
    ::close(out_pipe[0]);
    close();
    fail("fdopen");
  }
}

LineProcess::~LineProcess() { close(); }

std::string LineProcess::exchange(std::string_view line) {
  if (to_child_ < 0 || from_child_ == nullptr) {
    throw Error(ErrorCode::kProtocolError, "worker '" + command_ + "' is closed");
  }
  std::string buffer(line);
  buffer += '\n';
  std::size_t written = 0;
  while (written < buffer.size()) {
    const ssize_t n = ::write(to_child_, buffer.data() + written, buffer.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::kProtocolError,
                  "cannot write to worker '" + command_ + "': " + std::strerror(errno));
    }
    written += static_cast<std::size_t>(n);
  }

  char* raw = nullptr;
  std::size_t cap = 0;
  const ssize_t n = ::getline(&raw, &cap, from_child_);
  std::string response;
  if (n > 0) response.assign(raw, static_cast<std::size_t>(n));
  std::free(raw);
  if (n <= 0) {
    throw Error(ErrorCode::kProtocolError, "worker '" + command_ + "' closed its output");
  }
  while (!response.empty() && (response.back() == '\n' || response.back() == '\r')) {
    response.pop_back();
  }
  return response;
}

int LineProcess::close() {
  if (to_child_ >= 0) {
    ::close(to_child_);
    to_child_ = -1;
  }
  if (from_child_ != nullptr) {
    std::fclose(from_child_);
    from_child_ = nullptr;
  }
  int status = 0;
  if (pid_ > 0) {
    while (::waitpid(pid_, &status, 0) < 0 && errno == EINTR) {
    }
    pid_ = -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  return 0;
}

}  // namespace lmt
