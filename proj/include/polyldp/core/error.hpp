// Copyright 2026 The polyldp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
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

namespace polyldp {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument lies outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A requested object would exceed a configured size cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// Input is well formed but degenerate (for example an empty subset).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

// A polynomial construction could not reach its target accuracy.
class ConstructionError : public Error {
 public:
  ConstructionError(const std::string& what, double achieved_error)
      : Error(what), achieved_error_(achieved_error) {}
  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

// A player-side function broke its contract, e.g. a loss outside [0,1].
class ContractViolation : public Error {
 public:
  ContractViolation(const std::string& what, std::size_t player)
      : Error(what + " (player " + std::to_string(player) + ")"),
        player_(player) {}
  std::size_t player() const noexcept { return player_; }

 private:
  std::size_t player_;
};

// A linear system or gauge program has no feasible point.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require(bool condition, const char* message) {
  if (!condition) throw DomainError(message);
}

inline void require(bool condition, const std::string& message) {
  if (!condition) throw DomainError(message);
}

}  // namespace detail
}  // namespace polyldp
