// Copyright 2026 The DNA Authors
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

#ifndef DNA_ERROR_H_
#define DNA_ERROR_H_

#include <stdexcept>
#include <string>

namespace dna {

enum class ErrorCode {
  kInvalidArgument,
  kOutOfBounds,
  kMapParse,
  kNotConverged,
  kCapExhausted,
  kOffGrid,
  kSizeMismatch,
  kZeroBenchmark,
  kUndefinedBound,
  kSchema,
  kIo,
};

const char* ErrorCodeName(ErrorCode code);

// Base class for every error raised by the library. Callers that care about
// the failure mode switch on code(); everyone else catches std::exception.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dna

#endif  // DNA_ERROR_H_
