// wordrec/common/error.h

// Copyright 2026 The Wordrec Authors.
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

#ifndef WORDREC_COMMON_ERROR_H_
#define WORDREC_COMMON_ERROR_H_

#include <stdexcept>
#include <string>
#include <utility>

namespace wordrec {

// All recoverable failures carry a short machine-readable kind
// ("ConfigError", "NoAlignment", ...) plus a human-readable message.
// The CLI prints the kind on stderr and exits 1.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

}  // namespace wordrec

#endif  // WORDREC_COMMON_ERROR_H_
