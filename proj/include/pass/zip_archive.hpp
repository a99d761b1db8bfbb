#pragma once

#include <cstdint>
#include <cstring>
#include <map>
#include <string>
#include <vector>

#include <zlib.h>

#include "pass/errors.hpp"

namespace pass {

// Minimal read-only zip container, enough for OOXML packages: stored and
// deflated entries, no zip64, no encryption. Central directory sizes are
// authoritative (entries written with data descriptors still parse).
class ZipArchive {
 public:
  static ZipArchive from_bytes(std::vector<std::uint8_t> bytes) {
    ZipArchive zip;
    zip.bytes_ = std::move(bytes);
    zip.parse_central_directory();
    return zip;
  }

  bool contains(const std::string& name) const {
    return entries_.count(name) != 0;
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& [name, entry] : entries_) out.push_back(name);
    return out;
  }

  std::vector<std::uint8_t> read(const std::string& name) const {
    auto it = entries_.find(name);
    if (it == entries_.end()) {
      raise(ErrorCode::malformed_archive, "no such archive entry: " + name);
    }
    const Entry& e = it->second;

    // Local header: signature(4) versions(2) flags(2) method(2) time(4)
    // crc(4) csize(4) usize(4) namelen(2) extralen(2)
    if (e.local_offset + 30 > bytes_.size() ||
        read_u32(e.local_offset) != 0x04034b50) {
      raise(ErrorCode::malformed_archive,
            "bad local header for entry: " + name);
    }
    std::size_t name_len = read_u16(e.local_offset + 26);
    std::size_t extra_len = read_u16(e.local_offset + 28);
    std::size_t data_off = e.local_offset + 30 + name_len + extra_len;
    if (data_off + e.compressed_size > bytes_.size()) {
      raise(ErrorCode::malformed_archive, "truncated entry data: " + name);
    }

    std::vector<std::uint8_t> out;
    if (e.method == 0) {
      if (e.compressed_size != e.uncompressed_size) {
        raise(ErrorCode::malformed_archive,
              "stored entry size mismatch: " + name);
      }
      out.assign(bytes_.begin() + static_cast<std::ptrdiff_t>(data_off),
                 bytes_.begin() +
                     static_cast<std::ptrdiff_t>(data_off + e.compressed_size));
    } else if (e.method == 8) {
      out = inflate_raw(bytes_.data() + data_off, e.compressed_size,
                        e.uncompressed_size, name);
    } else {
      raise(ErrorCode::malformed_archive,
            "unsupported compression method in entry: " + name);
    }

    std::uint32_t crc =
        static_cast<std::uint32_t>(::crc32(0L, out.data(), out.size()));
    if (crc != e.crc32) {
      raise(ErrorCode::malformed_archive, "crc mismatch in entry: " + name);
    }
    return out;
  }

 private:
  struct Entry {
    std::uint16_t method = 0;
    std::uint32_t crc32 = 0;
    std::size_t compressed_size = 0;
    std::size_t uncompressed_size = 0;
    std::size_t local_offset = 0;
  };

  std::uint16_t read_u16(std::size_t off) const {
    return static_cast<std::uint16_t>(bytes_[off] | (bytes_[off + 1] << 8));
  }

  std::uint32_t read_u32(std::size_t off) const {
    return static_cast<std::uint32_t>(bytes_[off]) |
           (static_cast<std::uint32_t>(bytes_[off + 1]) << 8) |
           (static_cast<std::uint32_t>(bytes_[off + 2]) << 16) |
           (static_cast<std::uint32_t>(bytes_[off + 3]) << 24);
  }

  void parse_central_directory() {
    // End-of-central-directory record is within the last 64k + 22 bytes.
    if (bytes_.size() < 22) {
      raise(ErrorCode::malformed_archive, "file too small to be a zip");
    }
    std::size_t scan_start =
        bytes_.size() > 22 + 65535 ? bytes_.size() - 22 - 65535 : 0;
    std::size_t eocd = std::string::npos;
    for (std::size_t i = bytes_.size() - 22 + 1; i-- > scan_start;) {
      if (read_u32(i) == 0x06054b50) {
        eocd = i;
        break;
      }
    }
    if (eocd == std::string::npos) {
      raise(ErrorCode::malformed_archive, "end of central directory missing");
    }

    std::size_t count = read_u16(eocd + 10);
    std::size_t cd_size = read_u32(eocd + 12);
    std::size_t cd_offset = read_u32(eocd + 16);
    if (cd_offset + cd_size > bytes_.size()) {
      raise(ErrorCode::malformed_archive, "central directory out of bounds");
    }

    std::size_t pos = cd_offset;
    for (std::size_t i = 0; i < count; ++i) {
      if (pos + 46 > bytes_.size() || read_u32(pos) != 0x02014b50) {
        raise(ErrorCode::malformed_archive, "bad central directory entry");
      }
      Entry e;
      e.method = read_u16(pos + 10);
      e.crc32 = read_u32(pos + 16);
      e.compressed_size = read_u32(pos + 20);
      e.uncompressed_size = read_u32(pos + 24);
      std::size_t name_len = read_u16(pos + 28);
      std::size_t extra_len = read_u16(pos + 30);
      std::size_t comment_len = read_u16(pos + 32);
      e.local_offset = read_u32(pos + 42);
      if (e.compressed_size == 0xFFFFFFFF || e.local_offset == 0xFFFFFFFF) {
        raise(ErrorCode::malformed_archive, "zip64 archives not supported");
      }
      if (pos + 46 + name_len > bytes_.size()) {
        raise(ErrorCode::malformed_archive, "truncated entry name");
      }
      std::string name(reinterpret_cast<const char*>(bytes_.data() + pos + 46),
                       name_len);
      entries_[name] = e;
      pos += 46 + name_len + extra_len + comment_len;
    }
  }

  static std::vector<std::uint8_t> inflate_raw(const std::uint8_t* data,
                                               std::size_t size,
                                               std::size_t expected,
                                               const std::string& name) {
    std::vector<std::uint8_t> out(expected);
    z_stream zs;
    std::memset(&zs, 0, sizeof(zs));
    if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) {
      raise(ErrorCode::malformed_archive, "inflate init failed: " + name);
    }
    zs.next_in = const_cast<Bytef*>(data);
    zs.avail_in = static_cast<uInt>(size);
    zs.next_out = out.data();
    zs.avail_out = static_cast<uInt>(out.size());
    int rc = inflate(&zs, Z_FINISH);
    std::size_t produced = zs.total_out;
    inflateEnd(&zs);
    if (rc != Z_STREAM_END || produced != expected) {
      raise(ErrorCode::malformed_archive, "corrupt deflate stream: " + name);
    }
    return out;
  }

  std::vector<std::uint8_t> bytes_;
  std::map<std::string, Entry> entries_;
};

}  // namespace pass
