/*
 * Copyright 2026 The GATN Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef GATN_ERRORS_H_
#define GATN_ERRORS_H_

#include <stdexcept>
#include <string>

namespace gatn {

// Broad failure classes. The CLI maps each class onto an exit code and a
// stable machine-readable prefix.
enum class ErrorKind {
  kShape,       // operand dimensions disagree
  kParse,       // malformed input text or JSON
  kMissingToken,
  kDegenerate,  // zero-norm embedding, class without occurrences, ...
  kValidation,  // value outside its documented domain
  kConfig,      // inconsistent model/training configuration
  kNumeric,     // NaN or Inf produced or supplied
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

}  // namespace gatn

#endif  // GATN_ERRORS_H_
