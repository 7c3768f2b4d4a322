// Copyright 2026 The afford Authors.
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

#ifndef AFFORD_ERROR_H_
#define AFFORD_ERROR_H_

#include <stdexcept>
#include <string>

namespace afford {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  // Short machine-readable tag, e.g. "syntax_error".
  virtual const char* kind() const noexcept { return "error"; }
};

class SyntaxError : public Error {
 public:
  SyntaxError(int line, int column, const std::string& message)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }
  const char* kind() const noexcept override { return "syntax_error"; }

 private:
  int line_;
  int column_;
};

// A well-formed document that violates a GameSpec invariant.
class SemanticError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "semantic_error"; }
};

// A variant that cannot be applied to a given game.
class NotApplicable : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "not_applicable"; }
};

// Caller broke an operation's precondition (e.g. stepping a finished game).
class ContractViolation : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "contract_violation"; }
};

class IdentificationFailed : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "identification_failed"; }
};

class AmbiguousAgent : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "ambiguous_agent"; }
};

class IoError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "io_error"; }
};

}  // namespace afford

#endif  // AFFORD_ERROR_H_
