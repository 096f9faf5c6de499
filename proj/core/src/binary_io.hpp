#pragma once

// Little-endian binary helpers shared by the dictionary and model formats.
// Both writer and reader keep a running FNV-1a checksum of every byte after
// the magic so that corruption is detected at the trailer.

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "dictag/error.hpp"

namespace dictag::detail {

inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = kFnvOffset) noexcept {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

class BinaryWriter {
 public:
  explicit BinaryWriter(std::ostream& out) : out_(out) {}

  void raw(std::string_view bytes) { out_.write(bytes.data(), static_cast<std::streamsize>(bytes.size())); }

  void bytes(std::string_view b) {
    hash_ = fnv1a(b, hash_);
    raw(b);
  }

  template <class T>
  void integer(T value) {
    std::array<char, sizeof(T)> buf;
    auto u = static_cast<std::make_unsigned_t<T>>(value);
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      buf[i] = static_cast<char>(u & 0xFF);
      u = static_cast<std::make_unsigned_t<T>>(u >> 8);
    }
    bytes(std::string_view(buf.data(), buf.size()));
  }

  void real(double value) { integer(std::bit_cast<std::uint64_t>(value)); }

  void string(std::string_view s) {
    integer(static_cast<std::uint32_t>(s.size()));
    bytes(s);
  }

  /// Writes the checksum of everything written through bytes() so far.
  void trailer() {
    const std::uint64_t h = hash_;
    std::array<char, 8> buf;
    for (std::size_t i = 0; i < 8; ++i) buf[i] = static_cast<char>((h >> (8 * i)) & 0xFF);
    raw(std::string_view(buf.data(), buf.size()));
  }

  void check() const {
    if (!out_) throw Error(ErrorCode::IoError, "write failed");
  }

 private:
  std::ostream& out_;
  std::uint64_t hash_ = kFnvOffset;
};

class BinaryReader {
 public:
  explicit BinaryReader(std::istream& in) : in_(in) {}

  std::string raw(std::size_t n) {
    std::string s(n, '\0');
    in_.read(s.data(), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw Error(ErrorCode::CorruptFile, "unexpected end of file");
    }
    return s;
  }

  std::string bytes(std::size_t n) {
    std::string s = raw(n);
    hash_ = fnv1a(s, hash_);
    return s;
  }

  template <class T>
  T integer() {
    const std::string b = bytes(sizeof(T));
    std::make_unsigned_t<T> u = 0;
    for (std::size_t i = sizeof(T); i-- > 0;) {
      u = static_cast<std::make_unsigned_t<T>>((u << 8) | static_cast<unsigned char>(b[i]));
    }
    return static_cast<T>(u);
  }

  double real() { return std::bit_cast<double>(integer<std::uint64_t>()); }

  std::string string(std::size_t limit = 1u << 28) {
    const auto n = integer<std::uint32_t>();
    if (n > limit) throw Error(ErrorCode::CorruptFile, "string length out of range");
    return bytes(n);
  }

  /// Reads and verifies the trailer, then requires end of stream.
  void trailer() {
    const std::uint64_t expected = hash_;
    const std::string b = raw(8);
    std::uint64_t stored = 0;
    for (std::size_t i = 8; i-- > 0;) stored = (stored << 8) | static_cast<unsigned char>(b[i]);
    if (stored != expected) throw Error(ErrorCode::CorruptFile, "checksum mismatch");
    if (in_.peek() != std::char_traits<char>::eof()) {
      throw Error(ErrorCode::CorruptFile, "trailing bytes after checksum");
    }
  }

 private:
  std::istream& in_;
  std::uint64_t hash_ = kFnvOffset;
};

}  // namespace dictag::detail
