// Copyright 2026 The mtmct Authors.
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

// Internal little-endian binary primitives shared by the on-disk formats.

#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

static_assert(std::endian::native == std::endian::little,
              "on-disk formats are little-endian; big-endian hosts are "
              "not supported");

namespace mtmct::wire {

inline void write_bytes(std::ostream& os, const void* data, std::size_t n) {
  os.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
}

inline void read_bytes(std::istream& is, void* data, std::size_t n) {
  is.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
  if (!is) {
    throw std::runtime_error("unexpected end of binary stream");
  }
}

inline void write_u32(std::ostream& os, std::uint32_t v) {
  write_bytes(os, &v, sizeof(v));
}

inline void write_u64(std::ostream& os, std::uint64_t v) {
  write_bytes(os, &v, sizeof(v));
}

inline void write_f64(std::ostream& os, double v) {
  write_bytes(os, &v, sizeof(v));
}

inline std::uint32_t read_u32(std::istream& is) {
  std::uint32_t v = 0;
  read_bytes(is, &v, sizeof(v));
  return v;
}

inline std::uint64_t read_u64(std::istream& is) {
  std::uint64_t v = 0;
  read_bytes(is, &v, sizeof(v));
  return v;
}

inline double read_f64(std::istream& is) {
  double v = 0;
  read_bytes(is, &v, sizeof(v));
  return v;
}

inline void write_magic(std::ostream& os, const char (&magic)[9]) {
  write_bytes(os, magic, 8);
}

inline void expect_magic(std::istream& is, const char (&magic)[9],
                         const std::string& what) {
  char buf[8];
  read_bytes(is, buf, 8);
  if (std::memcmp(buf, magic, 8) != 0) {
    throw std::runtime_error("bad magic in " + what);
  }
}

}  // namespace mtmct::wire
