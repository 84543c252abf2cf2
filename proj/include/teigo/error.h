// Copyright 2026 The teigo Authors.
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

#ifndef TEIGO_ERROR_H_
#define TEIGO_ERROR_H_

#include <stdexcept>
#include <string>

namespace teigo {

// Error classes. The CLI maps each class to a process exit code.
enum class ErrorKind {
  kUsage,       // bad arguments or API misuse
  kParse,       // malformed XML/JSON input
  kSchema,      // well-formed input that violates the document schema
  kFormat,      // wrong magic, missing fields, unknown versions
  kValidation,  // values out of range (spans, splits, tag sequences)
  kIntegrity,   // truncated or corrupted binary payloads
  kLanguage,    // unknown language or language mismatch
  kNumeric,     // non-finite values during training
  kIo,          // unreadable or unwritable files
  kInternal,
};

const char* ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace teigo

#endif  // TEIGO_ERROR_H_
