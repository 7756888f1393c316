// Copyright 2026 The Groundkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace groundkit {

// Error categories map to CLI exit codes: ConfigError -> 2, DataError -> 3,
// ClientError -> 4.

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Syntax error in an action expression; `position` is the byte offset into
// the input where parsing failed.
class ActionParseError : public DataError {
 public:
  ActionParseError(const std::string& what, std::size_t position)
      : DataError(what + " (at offset " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Raw action name with no registry mapping. Never silently passed through.
class UnmappedActionError : public DataError {
 public:
  using DataError::DataError;
};

class ClientError : public std::runtime_error {
 public:
  ClientError(const std::string& what, bool transient)
      : std::runtime_error(what), transient_(transient) {}

  bool transient() const { return transient_; }

 private:
  bool transient_;
};

// DFS ran out of step budget with unexplored transitions remaining.
class BudgetExhaustedError : public DataError {
 public:
  BudgetExhaustedError(const std::string& what, std::size_t frontier_size)
      : DataError(what + " (frontier size " + std::to_string(frontier_size) +
                  ")"),
        frontier_size_(frontier_size) {}

  std::size_t frontier_size() const { return frontier_size_; }

 private:
  std::size_t frontier_size_;
};

}  // namespace groundkit
