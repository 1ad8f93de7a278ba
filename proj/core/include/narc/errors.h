// Copyright 2026 The narc Authors.
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

#ifndef NARC_ERRORS_H_
#define NARC_ERRORS_H_

#include <stdexcept>
#include <string>

namespace narc {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input that is well-formed on disk but violates a contract: a missing JSON
// field, an out-of-range answer letter, an invalid annotation payload.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A file or directory could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace narc

#endif  // NARC_ERRORS_H_
