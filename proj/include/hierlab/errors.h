// Copyright 2026 The hierlab Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HIERLAB_ERRORS_H_
#define HIERLAB_ERRORS_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace hierlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Kernel

class KernelError : public Error {
 public:
  using Error::Error;
};

/// Raised when whnf exceeds `DefEqConfig::unfold_depth` delta steps.
class FuelExhausted : public KernelError {
 public:
  explicit FuelExhausted(int depth)
      : KernelError("unfold fuel exhausted after " + std::to_string(depth) +
                    " delta steps"),
        depth(depth) {}
  int depth;
};

class IllTyped : public KernelError {
 public:
  using KernelError::KernelError;
};

/// Malformed environment: duplicate names, forward references.
class EnvironmentError : public KernelError {
 public:
  using KernelError::KernelError;
};

// Surface

struct Position {
  int line = 1;
  int column = 1;
  friend bool operator==(const Position&, const Position&) = default;
};

class ParseError : public Error {
 public:
  ParseError(Position pos, std::string found, std::vector<std::string> expected);
  ParseError(Position pos, std::string message);
  Position position;
  std::vector<std::string> expected;
};

/// A name referenced before (or without) its declaration.
class ScopeError : public Error {
 public:
  ScopeError(std::string name, Position pos);
  std::string name;
  Position position;
};

// Elaborator

class ElabError : public Error {
 public:
  ElabError(std::string message, Position pos = {})
      : Error(std::move(message)), position(pos) {}
  Position position;
};

class FieldTypeClash : public ElabError {
 public:
  FieldTypeClash(std::string cls, std::string field, std::string type1,
                 std::string type2, Position pos = {})
      : ElabError("field '" + field + "' of '" + cls +
                      "' is inherited with different types: " + type1 +
                      " and " + type2,
                  pos),
        field(std::move(field)),
        type1(std::move(type1)),
        type2(std::move(type2)) {}
  std::string field;
  std::string type1;
  std::string type2;
};

class OverrideInvalid : public ElabError {
 public:
  using ElabError::ElabError;
};

// Analyzer

class CycleDetected : public Error {
 public:
  using Error::Error;
};

}  // namespace hierlab

#endif  // HIERLAB_ERRORS_H_
