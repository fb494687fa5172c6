// Copyright 2026 The Coherence Fusion Authors.
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

#ifndef COH_ERRORS_H_
#define COH_ERRORS_H_

#include <stdexcept>
#include <string>

namespace coh {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value outside the domain of an operation (e.g. a raw score out of range).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A document, graph or sequence that violates a structural invariant.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// A relation sense that is not part of the registry.
class RegistryError : public Error {
 public:
  using Error::Error;
};

// A caller broke a precondition (unlabeled training data, bad config...).
class ContractError : public Error {
 public:
  using Error::Error;
};

// Non-finite values showed up during a forward pass or training.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Malformed input files. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string &msg, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace coh

#endif  // COH_ERRORS_H_
