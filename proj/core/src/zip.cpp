#include "zip.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace malseries::zip {

namespace {

uint16_t rd16(const unsigned char* p) { return static_cast<uint16_t>(p[0] | p[1] << 8); }
uint32_t rd32(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | static_cast<uint32_t>(p[1]) << 8 |
         static_cast<uint32_t>(p[2]) << 16 | static_cast<uint32_t>(p[3]) << 24;
}

std::string inflate_raw(const std::string& compressed, size_t expected) {
  std::string out(expected, '\0');
  z_stream zs{};
  if (inflateInit2(&zs, -15) != Z_OK) throw std::runtime_error("inflateInit failed");
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(compressed.data()));
  zs.avail_in = static_cast<uInt>(compressed.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  int rc = inflate(&zs, Z_FINISH);
  inflateEnd(&zs);
  if (rc != Z_STREAM_END || zs.total_out != expected)
    throw std::runtime_error("zip entry inflation failed");
  return out;
}

}  // namespace

Archive::Archive(const std::filesystem::path& path) : path_(path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open zip: " + path.string());
  in.seekg(0, std::ios::end);
  auto file_size = static_cast<uint64_t>(in.tellg());
  if (file_size < 22) throw std::runtime_error("not a zip archive: " + path.string());

  // End-of-central-directory record: scan the final 64 KiB for the signature.
  size_t tail = static_cast<size_t>(std::min<uint64_t>(file_size, 65557));
  std::string buf(tail, '\0');
  in.seekg(static_cast<std::streamoff>(file_size - tail));
  in.read(buf.data(), static_cast<std::streamsize>(tail));
  const unsigned char* b = reinterpret_cast<const unsigned char*>(buf.data());
  size_t eocd = std::string::npos;
  for (size_t i = tail - 22 + 1; i-- > 0;) {
    if (rd32(b + i) == 0x06054b50) {
      eocd = i;
      break;
    }
  }
  if (eocd == std::string::npos)
    throw std::runtime_error("zip central directory not found: " + path.string());

  uint16_t count = rd16(b + eocd + 10);
  uint32_t cd_size = rd32(b + eocd + 12);
  uint32_t cd_offset = rd32(b + eocd + 16);

  std::string cd(cd_size, '\0');
  in.seekg(cd_offset);
  in.read(cd.data(), cd_size);
  if (!in) throw std::runtime_error("truncated central directory: " + path.string());

  const unsigned char* p = reinterpret_cast<const unsigned char*>(cd.data());
  const unsigned char* end = p + cd_size;
  entries_.reserve(count);
  for (uint16_t i = 0; i < count; ++i) {
    if (p + 46 > end || rd32(p) != 0x02014b50)
      throw std::runtime_error("corrupt central directory: " + path.string());
    Entry e;
    e.method = rd16(p + 10);
    e.compressed_size = rd32(p + 20);
    e.uncompressed_size = rd32(p + 24);
    uint16_t name_len = rd16(p + 28);
    uint16_t extra_len = rd16(p + 30);
    uint16_t comment_len = rd16(p + 32);
    e.local_header_offset = rd32(p + 42);
    if (p + 46 + name_len > end)
      throw std::runtime_error("corrupt central directory: " + path.string());
    e.name.assign(reinterpret_cast<const char*>(p + 46), name_len);
    p += 46 + name_len + extra_len + comment_len;
    entries_.push_back(std::move(e));
  }
}

std::string Archive::read(const Entry& e) const {
  std::ifstream in(path_, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open zip: " + path_.string());
  unsigned char hdr[30];
  in.seekg(e.local_header_offset);
  in.read(reinterpret_cast<char*>(hdr), 30);
  if (!in || rd32(hdr) != 0x04034b50)
    throw std::runtime_error("corrupt local header in " + path_.string());
  uint16_t name_len = rd16(hdr + 26);
  uint16_t extra_len = rd16(hdr + 28);
  in.seekg(static_cast<std::streamoff>(e.local_header_offset) + 30 + name_len + extra_len);
  std::string raw(e.compressed_size, '\0');
  in.read(raw.data(), static_cast<std::streamsize>(raw.size()));
  if (!in) throw std::runtime_error("truncated zip entry " + e.name);
  if (e.method == 0) return raw;
  if (e.method == 8) return inflate_raw(raw, e.uncompressed_size);
  throw std::runtime_error("unsupported zip compression method for " + e.name);
}

}  // namespace malseries::zip
