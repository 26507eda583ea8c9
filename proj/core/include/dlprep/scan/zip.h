// Copyright 2026 The dlprep Authors
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

#ifndef DLPREP_SCAN_ZIP_H_
#define DLPREP_SCAN_ZIP_H_

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dlprep::scan {

class ZipError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ZipEntry {
  std::string name;
  uint16_t flags = 0;
  uint16_t method = 0;  // 0 stored, 8 deflate
  uint32_t crc32 = 0;
  uint32_t compressed_size = 0;
  uint32_t uncompressed_size = 0;
  uint32_t local_header_offset = 0;

  bool encrypted() const { return flags & 0x1; }
  bool is_directory() const { return !name.empty() && name.back() == '/'; }
};

// Read-only view of a ZIP archive held in memory. Only the central directory
// is trusted for names and sizes; zip64 and multi-disk archives are rejected.
class ZipReader {
 public:
  // Throws ZipError when no valid end-of-central-directory record is found
  // or the directory is truncated.
  explicit ZipReader(std::string bytes);
  static ZipReader Open(const std::filesystem::path& path);

  const std::vector<ZipEntry>& entries() const { return entries_; }
  const ZipEntry* Find(std::string_view name) const;

  // Decompresses one entry and checks its CRC. Throws ZipError for encrypted
  // entries, unknown methods, bad data or CRC mismatch.
  std::string Read(const ZipEntry& entry) const;

 private:
  std::string bytes_;
  std::vector<ZipEntry> entries_;
};

// Minimal archive writer, enough to build test and demo packages.
class ZipWriter {
 public:
  void Add(std::string name, std::string_view data, bool deflate = true);
  // Stores |data| with the encryption flag set, as an encrypted entry would
  // appear to a reader that has no key.
  void AddEncrypted(std::string name, std::string_view data);
  std::string Finish() const;

 private:
  struct Pending {
    ZipEntry entry;
    std::string payload;
  };
  std::vector<Pending> pending_;
};

uint32_t Crc32(std::string_view data);

}  // namespace dlprep::scan

#endif  // DLPREP_SCAN_ZIP_H_
