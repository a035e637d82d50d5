#pragma once

#include "moodshift/types.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

namespace moodshift {

static_assert(std::endian::native == std::endian::little,
              "file formats are little-endian; big-endian hosts are unsupported");

/// Little-endian binary writer for the catalog/similarity-map/checkpoint
/// formats.
class BinaryWriter {
 public:
  explicit BinaryWriter(const std::string& path)
      : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw ValidationError("cannot open file for writing: " + path);
  }

  void write_magic(const char magic[4]) { raw(magic, 4); }

  void write_u32(std::uint32_t v) { raw(reinterpret_cast<const char*>(&v), 4); }
  void write_u64(std::uint64_t v) { raw(reinterpret_cast<const char*>(&v), 8); }
  void write_f32(float v) { raw(reinterpret_cast<const char*>(&v), 4); }

  void write_f32_array(const float* data, std::size_t count) {
    raw(reinterpret_cast<const char*>(data), count * sizeof(float));
  }

  /// u32 byte length followed by UTF-8 bytes.
  void write_string(const std::string& s) {
    write_u32(static_cast<std::uint32_t>(s.size()));
    raw(s.data(), s.size());
  }

  void close() {
    out_.close();
    if (!out_) throw std::runtime_error("write failed: " + path_);
  }

 private:
  void raw(const char* p, std::size_t n) {
    out_.write(p, static_cast<std::streamsize>(n));
    if (!out_) throw std::runtime_error("write failed: " + path_);
  }

  std::string path_;
  std::ofstream out_;
};

class BinaryReader {
 public:
  explicit BinaryReader(const std::string& path)
      : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw ValidationError("cannot open file: " + path);
  }

  /// Reads 4 bytes and checks them against the expected format magic.
  void expect_magic(const char magic[4]) {
    char got[4] = {0, 0, 0, 0};
    raw(got, 4, "magic");
    if (std::memcmp(got, magic, 4) != 0) {
      throw ValidationError(path_ + ": bad magic, expected \"" +
                            std::string(magic, 4) + "\"");
    }
  }

  std::uint32_t read_u32(const char* what = "u32") {
    std::uint32_t v;
    raw(reinterpret_cast<char*>(&v), 4, what);
    return v;
  }

  std::uint64_t read_u64(const char* what = "u64") {
    std::uint64_t v;
    raw(reinterpret_cast<char*>(&v), 8, what);
    return v;
  }

  float read_f32(const char* what = "f32") {
    float v;
    raw(reinterpret_cast<char*>(&v), 4, what);
    return v;
  }

  /// Reads count floats; returns the number actually read (short on EOF).
  std::size_t read_f32_array_partial(float* data, std::size_t count) {
    in_.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * sizeof(float)));
    const std::size_t bytes = static_cast<std::size_t>(in_.gcount());
    return bytes / sizeof(float);
  }

  std::string read_string(const char* what = "string") {
    const std::uint32_t len = read_u32(what);
    std::string s(len, '\0');
    if (len > 0) raw(s.data(), len, what);
    return s;
  }

  bool at_eof() {
    in_.peek();
    return in_.eof();
  }

  const std::string& path() const { return path_; }

 private:
  void raw(char* p, std::size_t n, const char* what) {
    in_.read(p, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw ValidationError(path_ + ": truncated file while reading " + what);
    }
  }

  std::string path_;
  std::ifstream in_;
};

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& contents);
std::vector<std::string> read_lines(const std::string& path);

/// FNV-1a 64-bit hash, used for config fingerprints in run manifests.
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace moodshift
