#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tpra {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Little-endian fixed-width writer over an ostream.
class BinaryWriter {
 public:
  explicit BinaryWriter(std::ostream& os) : os_(os) {}

  void u8(std::uint8_t v);
  void u32(std::uint32_t v);
  void i32(std::int32_t v);
  void u64(std::uint64_t v);
  void f64(double v);
  void bytes(std::span<const std::uint8_t> data);
  void u32s(std::span<const std::uint32_t> data);
  void i32s(std::span<const std::int32_t> data);
  void u64s(std::span<const std::uint64_t> data);
  void f64s(std::span<const double> data);

 private:
  std::ostream& os_;
};

class BinaryReader {
 public:
  explicit BinaryReader(std::istream& is) : is_(is) {}

  std::uint8_t u8();
  std::uint32_t u32();
  std::int32_t i32();
  std::uint64_t u64();
  double f64();
  void bytes(std::span<std::uint8_t> out);
  void u32s(std::span<std::uint32_t> out);
  void i32s(std::span<std::int32_t> out);
  void u64s(std::span<std::uint64_t> out);
  void f64s(std::span<double> out);

 private:
  void raw(void* dst, std::size_t n);
  std::istream& is_;
};

/// FNV-1a, 64 bit.
std::uint64_t fnv1a64(std::span<const std::uint8_t> data, std::uint64_t h = 0xcbf29ce484222325ULL);
std::uint64_t fnv1a64(const std::string& text);

/// ostream that only hashes what is written to it.
class HashingStream {
 public:
  HashingStream();
  ~HashingStream();
  HashingStream(const HashingStream&) = delete;
  HashingStream& operator=(const HashingStream&) = delete;

  std::ostream& stream();
  std::uint64_t digest() const;
  std::uint64_t size() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace tpra
