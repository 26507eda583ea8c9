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

#include "dlprep/scan/zip.h"

#include <zlib.h>

#include <algorithm>
#include <cstring>
#include <fstream>
#include <sstream>

namespace dlprep::scan {

namespace {

constexpr uint32_t kLocalHeaderSig = 0x04034b50;
constexpr uint32_t kCentralHeaderSig = 0x02014b50;
constexpr uint32_t kEndOfDirectorySig = 0x06054b50;
constexpr size_t kLocalHeaderSize = 30;
constexpr size_t kCentralHeaderSize = 46;
constexpr size_t kEndOfDirectorySize = 22;

uint16_t Get16(std::string_view b, size_t at) {
  return static_cast<uint16_t>(static_cast<uint8_t>(b[at]) |
                               static_cast<uint8_t>(b[at + 1]) << 8);
}

uint32_t Get32(std::string_view b, size_t at) {
  return static_cast<uint32_t>(Get16(b, at)) | static_cast<uint32_t>(Get16(b, at + 2)) << 16;
}

void Put16(std::string& out, uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>(v >> 8));
}

void Put32(std::string& out, uint32_t v) {
  Put16(out, static_cast<uint16_t>(v & 0xffff));
  Put16(out, static_cast<uint16_t>(v >> 16));
}

std::string Inflate(std::string_view in, size_t expected) {
  z_stream zs{};
  if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) throw ZipError("inflateInit2 failed");
  std::string out(expected, '\0');
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
  zs.avail_in = static_cast<uInt>(in.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  int rc = inflate(&zs, Z_FINISH);
  size_t produced = zs.total_out;
  inflateEnd(&zs);
  if (rc != Z_STREAM_END || produced != expected)
    throw ZipError("corrupt deflate stream");
  return out;
}

std::string Deflate(std::string_view in) {
  z_stream zs{};
  if (deflateInit2(&zs, Z_BEST_COMPRESSION, Z_DEFLATED, -MAX_WBITS, 8,
                   Z_DEFAULT_STRATEGY) != Z_OK)
    throw ZipError("deflateInit2 failed");
  std::string out(deflateBound(&zs, static_cast<uLong>(in.size())), '\0');
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
  zs.avail_in = static_cast<uInt>(in.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  int rc = deflate(&zs, Z_FINISH);
  out.resize(zs.total_out);
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) throw ZipError("deflate failed");
  return out;
}

}  // namespace

uint32_t Crc32(std::string_view data) {
  return static_cast<uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(data.data()), static_cast<uInt>(data.size())));
}

ZipReader::ZipReader(std::string bytes) : bytes_(std::move(bytes)) {
  std::string_view b = bytes_;
  if (b.size() < kEndOfDirectorySize) throw ZipError("file too small for a zip archive");

  size_t lowest = b.size() > kEndOfDirectorySize + 0xffff
                      ? b.size() - kEndOfDirectorySize - 0xffff
                      : 0;
  size_t eocd = std::string_view::npos;
  for (size_t at = b.size() - kEndOfDirectorySize + 1; at-- > lowest;) {
    if (Get32(b, at) == kEndOfDirectorySig &&
        at + kEndOfDirectorySize + Get16(b, at + 20) == b.size()) {
      eocd = at;
      break;
    }
  }
  if (eocd == std::string_view::npos) throw ZipError("end of central directory not found");

  uint16_t disk = Get16(b, eocd + 4);
  uint16_t cd_disk = Get16(b, eocd + 6);
  uint16_t count = Get16(b, eocd + 10);
  uint32_t cd_size = Get32(b, eocd + 12);
  uint32_t cd_offset = Get32(b, eocd + 16);
  if (disk != 0 || cd_disk != 0) throw ZipError("multi-disk archives are not supported");
  if (count == 0xffff || cd_offset == 0xffffffff || cd_size == 0xffffffff)
    throw ZipError("zip64 archives are not supported");
  if (static_cast<uint64_t>(cd_offset) + cd_size > eocd)
    throw ZipError("central directory out of bounds");

  size_t at = cd_offset;
  size_t end = static_cast<size_t>(cd_offset) + cd_size;
  for (uint16_t i = 0; i < count; ++i) {
    if (at + kCentralHeaderSize > end || Get32(b, at) != kCentralHeaderSig)
      throw ZipError("truncated central directory");
    ZipEntry e;
    e.flags = Get16(b, at + 8);
    e.method = Get16(b, at + 10);
    e.crc32 = Get32(b, at + 16);
    e.compressed_size = Get32(b, at + 20);
    e.uncompressed_size = Get32(b, at + 24);
    uint16_t name_len = Get16(b, at + 28);
    uint16_t extra_len = Get16(b, at + 30);
    uint16_t comment_len = Get16(b, at + 32);
    e.local_header_offset = Get32(b, at + 42);
    size_t next = at + kCentralHeaderSize + name_len + extra_len + comment_len;
    if (next > end) throw ZipError("truncated central directory");
    e.name.assign(b.substr(at + kCentralHeaderSize, name_len));
    if (e.local_header_offset >= cd_offset) throw ZipError("entry offset out of bounds: " + e.name);
    entries_.push_back(std::move(e));
    at = next;
  }
}

ZipReader ZipReader::Open(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ZipError("cannot open " + path.string());
  std::ostringstream bytes;
  bytes << in.rdbuf();
  return ZipReader(bytes.str());
}

const ZipEntry* ZipReader::Find(std::string_view name) const {
  for (const auto& e : entries_)
    if (e.name == name) return &e;
  return nullptr;
}

std::string ZipReader::Read(const ZipEntry& entry) const {
  if (entry.encrypted()) throw ZipError("entry is encrypted: " + entry.name);
  std::string_view b = bytes_;
  size_t at = entry.local_header_offset;
  if (at + kLocalHeaderSize > b.size() || Get32(b, at) != kLocalHeaderSig)
    throw ZipError("bad local header: " + entry.name);
  size_t data = at + kLocalHeaderSize + Get16(b, at + 26) + Get16(b, at + 28);
  if (data + entry.compressed_size > b.size()) throw ZipError("entry data out of bounds: " + entry.name);
  std::string_view raw = b.substr(data, entry.compressed_size);

  std::string out;
  switch (entry.method) {
    case 0:
      if (entry.compressed_size != entry.uncompressed_size)
        throw ZipError("stored entry size mismatch: " + entry.name);
      out.assign(raw);
      break;
    case 8:
      try {
        out = Inflate(raw, entry.uncompressed_size);
      } catch (const ZipError& e) {
        throw ZipError(std::string(e.what()) + ": " + entry.name);
      }
      break;
    default:
      throw ZipError("unsupported compression method " + std::to_string(entry.method) +
                     ": " + entry.name);
  }
  if (Crc32(out) != entry.crc32) throw ZipError("crc mismatch: " + entry.name);
  return out;
}

void ZipWriter::Add(std::string name, std::string_view data, bool deflate) {
  Pending p;
  p.entry.name = std::move(name);
  p.entry.crc32 = Crc32(data);
  p.entry.uncompressed_size = static_cast<uint32_t>(data.size());
  if (deflate) {
    p.entry.method = 8;
    p.payload = Deflate(data);
  } else {
    p.payload.assign(data);
  }
  p.entry.compressed_size = static_cast<uint32_t>(p.payload.size());
  pending_.push_back(std::move(p));
}

void ZipWriter::AddEncrypted(std::string name, std::string_view data) {
  Add(std::move(name), data, false);
  pending_.back().entry.flags |= 0x1;
}

std::string ZipWriter::Finish() const {
  std::string out;
  std::vector<uint32_t> offsets;
  for (const auto& p : pending_) {
    offsets.push_back(static_cast<uint32_t>(out.size()));
    Put32(out, kLocalHeaderSig);
    Put16(out, 20);
    Put16(out, p.entry.flags);
    Put16(out, p.entry.method);
    Put16(out, 0);       // time
    Put16(out, 0x21);    // date: 1980-01-01
    Put32(out, p.entry.crc32);
    Put32(out, p.entry.compressed_size);
    Put32(out, p.entry.uncompressed_size);
    Put16(out, static_cast<uint16_t>(p.entry.name.size()));
    Put16(out, 0);
    out += p.entry.name;
    out += p.payload;
  }
  uint32_t cd_offset = static_cast<uint32_t>(out.size());
  for (size_t i = 0; i < pending_.size(); ++i) {
    const ZipEntry& e = pending_[i].entry;
    Put32(out, kCentralHeaderSig);
    Put16(out, 20);
    Put16(out, 20);
    Put16(out, e.flags);
    Put16(out, e.method);
    Put16(out, 0);
    Put16(out, 0x21);
    Put32(out, e.crc32);
    Put32(out, e.compressed_size);
    Put32(out, e.uncompressed_size);
    Put16(out, static_cast<uint16_t>(e.name.size()));
    Put16(out, 0);
    Put16(out, 0);
    Put16(out, 0);
    Put16(out, 0);
    Put32(out, 0);
    Put32(out, offsets[i]);
    out += e.name;
  }
  uint32_t cd_size = static_cast<uint32_t>(out.size()) - cd_offset;
  Put32(out, kEndOfDirectorySig);
  Put16(out, 0);
  Put16(out, 0);
  Put16(out, static_cast<uint16_t>(pending_.size()));
  Put16(out, static_cast<uint16_t>(pending_.size()));
  Put32(out, cd_size);
  Put32(out, cd_offset);
  Put16(out, 0);
  return out;
}

}  // namespace dlprep::scan
