/* Copyright 2026 The markmt Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace markmt {

/// Error classes surfaced by the library. The C API maps each one onto a
/// status code; the CLI maps all of them onto exit code 1.
enum class ErrorCode {
  kInvalidArgument,
  kMalformedMarkup,
  kDecode,
  kNestingUnsupported,
  kLocationStale,
  kSpanConflict,
  kEmptyCorpus,
  kDimensionMismatch,
  kIndexOutOfBounds,
  kUnsupportedPair,
  kBackendUnavailable,
  kTimeout,
  kAuth,
  kProtocol,
  kEmptyInput,
  kTooFewSamples,
  kSchema,
  kMissingHypotheses,
  kInsufficientSystems,
  kUnknownTask,
  kUnknownLabel,
  kIo,
};

const char *error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// Ill-formed markup, with a 1-based source position.
class MalformedMarkup : public Error {
 public:
  MalformedMarkup(int line, int column, const std::string &message)
      : Error(ErrorCode::kMalformedMarkup,
              "line " + std::to_string(line) + ", column " +
                  std::to_string(column) + ": " + message),
        line_(line),
        column_(column),
        detail_(message) {}

  int line() const { return line_; }
  int column() const { return column_; }
  const std::string &detail() const { return detail_; }

 private:
  int line_;
  int column_;
  std::string detail_;
};

/// Dataset record that failed validation. `line` is 1-based; 0 means the
/// problem concerns the file as a whole.
class SchemaError : public Error {
 public:
  SchemaError(int line, const std::string &field, const std::string &message)
      : Error(ErrorCode::kSchema, "line " + std::to_string(line) + ", field '" +
                                      field + "': " + message),
        line_(line),
        field_(field) {}

  int line() const { return line_; }
  const std::string &field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

class BackendUnavailable : public Error {
 public:
  BackendUnavailable(bool retryable, const std::string &message)
      : Error(ErrorCode::kBackendUnavailable, message), retryable_(retryable) {}

  bool retryable() const { return retryable_; }

 private:
  bool retryable_;
};

/// A system run lacks hypotheses for the listed items.
class MissingHypotheses : public Error {
 public:
  explicit MissingHypotheses(std::vector<std::string> item_ids)
      : Error(ErrorCode::kMissingHypotheses, describe(item_ids)), item_ids_(std::move(item_ids)) {}

  const std::vector<std::string> &item_ids() const { return item_ids_; }

 private:
  static std::string describe(const std::vector<std::string> &ids) {
    std::string s = "missing hypotheses for " + std::to_string(ids.size()) + " item(s):";
    for (const auto &id : ids) s += " " + id;
    return s;
  }

  std::vector<std::string> item_ids_;
};

}  // namespace markmt
