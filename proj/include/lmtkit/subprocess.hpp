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

#pragma once

#include <cstdio>
#include <string>
#include <string_view>
#include <sys/types.h>

namespace lmt {

/// A child process ("/bin/sh -c <command>") spoken to one line at a time:
/// each request line is written and flushed, then exactly one response line
/// is read. stderr is inherited. SIGPIPE is ignored process-wide once a
/// child is spawned so a dead worker surfaces as an error instead.
class LineProcess {
 public:
  explicit LineProcess(const std::string& command);
  ~LineProcess();

  LineProcess(const LineProcess&) = delete;
  LineProcess& operator=(const LineProcess&) = delete;

  /// Throws ProtocolError when the child closes its output or cannot be
  /// written to.
  std::string exchange(std::string_view line);

  /// Closes stdin and waits; returns the exit status (or -1 on signal).
  int close();

  const std::string& command() const { return command_; }

 private:
  std::string command_;
  pid_t pid_ = -1;
  int to_child_ = -1;
  std::FILE* from_child_ = nullptr;
};

}  // namespace lmt
