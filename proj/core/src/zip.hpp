#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace malseries::zip {

struct Entry {
  std::string name;
  uint16_t method = 0;  // 0 = stored, 8 = deflated
  uint32_t compressed_size = 0;
  uint32_t uncompressed_size = 0;
  uint32_t local_header_offset = 0;
};

/// Minimal read-only zip archive: central directory listing plus per-entry
/// extraction (stored and deflated methods only). Enough for osv.dev bulk
/// exports; no zip64, no encryption.
class Archive {
 public:
  explicit Archive(const std::filesystem::path& path);

  const std::vector<Entry>& entries() const { return entries_; }
  std::string read(const Entry& e) const;

 private:
  std::filesystem::path path_;
  std::vector<Entry> entries_;
};

}  // namespace malseries::zip
