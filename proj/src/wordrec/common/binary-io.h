// wordrec/common/binary-io.h

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

#ifndef WORDREC_COMMON_BINARY_IO_H_
#define WORDREC_COMMON_BINARY_IO_H_

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "wordrec/common/error.h"

// Little-endian scalar I/O for the binary file formats (features, checkpoints).
// The toolkit only targets little-endian hosts; a static assert guards that.

namespace wordrec {

static_assert(std::endian::native == std::endian::little,
              "binary formats are little-endian; big-endian hosts unsupported");

template <typename T>
void WriteScalar(std::ostream& os, T value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T ReadScalar(std::istream& is, const char* what) {
  T value;
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!is) throw Error("FormatError", std::string("truncated read: ") + what);
  return value;
}

inline void WriteMagic(std::ostream& os, const char magic[4]) {
  os.write(magic, 4);
}

inline void ExpectMagic(std::istream& is, const char magic[4],
                        const std::string& path) {
  char got[4];
  is.read(got, 4);
  if (!is || std::memcmp(got, magic, 4) != 0) {
    throw Error("FormatError", "bad magic in " + path);
  }
}

}  // namespace wordrec

#endif  // WORDREC_COMMON_BINARY_IO_H_
