// Copyright 2026 The ltaudit Authors
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

#ifndef LTAUDIT_ERRORS_H_
#define LTAUDIT_ERRORS_H_

#include <stdexcept>
#include <string>

namespace ltaudit {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Violated precondition: bad shapes, out-of-range parameters, empty inputs.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Non-finite value encountered during training. Training never continues
// past one of these.
class NumericError : public Error {
 public:
  using Error::Error;
};

// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

enum class FormatErrorCode {
  kBadMagic,
  kTruncated,
  kCountMismatch,
  kBadSize,
  kBadLabel,
  kBadDocument,
};

const char* FormatErrorCodeName(FormatErrorCode code);

// Malformed dataset or serialized document.
class FormatError : public Error {
 public:
  FormatError(FormatErrorCode code, const std::string& what)
      : Error(std::string(FormatErrorCodeName(code)) + ": " + what),
        code_(code) {}

  FormatErrorCode code() const { return code_; }

 private:
  FormatErrorCode code_;
};

inline const char* FormatErrorCodeName(FormatErrorCode code) {
  switch (code) {
    case FormatErrorCode::kBadMagic:
      return "bad magic";
    case FormatErrorCode::kTruncated:
      return "truncated file";
    case FormatErrorCode::kCountMismatch:
      return "count mismatch";
    case FormatErrorCode::kBadSize:
      return "bad file size";
    case FormatErrorCode::kBadLabel:
      return "bad label";
    case FormatErrorCode::kBadDocument:
      return "bad document";
  }
  return "unknown";
}

}  // namespace ltaudit

#endif  // LTAUDIT_ERRORS_H_
