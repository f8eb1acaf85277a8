#include "tpra/binary_io.hpp"

#include <bit>
#include <cstring>
#include <istream>
#include <ostream>
#include <streambuf>

namespace tpra {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big,
              "mixed-endian platforms are not supported");

template <typename T>
T to_le(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
  }
  return v;
}

template <typename T>
void write_scalar(std::ostream& os, T v) {
  v = to_le(v);
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void write_array(std::ostream& os, std::span<const T> data) {
  if constexpr (std::endian::native == std::endian::little) {
    os.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size_bytes()));
  } else {
    for (T v : data) write_scalar(os, v);
  }
}

}  // namespace

void BinaryWriter::u8(std::uint8_t v) { write_scalar(os_, v); }
void BinaryWriter::u32(std::uint32_t v) { write_scalar(os_, v); }
void BinaryWriter::i32(std::int32_t v) { write_scalar(os_, v); }
void BinaryWriter::u64(std::uint64_t v) { write_scalar(os_, v); }
void BinaryWriter::f64(double v) { write_scalar(os_, v); }
void BinaryWriter::bytes(std::span<const std::uint8_t> d) { write_array(os_, d); }
void BinaryWriter::u32s(std::span<const std::uint32_t> d) { write_array(os_, d); }
void BinaryWriter::i32s(std::span<const std::int32_t> d) { write_array(os_, d); }
void BinaryWriter::u64s(std::span<const std::uint64_t> d) { write_array(os_, d); }
void BinaryWriter::f64s(std::span<const double> d) { write_array(os_, d); }

void BinaryReader::raw(void* dst, std::size_t n) {
  is_.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(is_.gcount()) != n) throw FormatError("unexpected end of binary data");
}

namespace {

template <typename T>
void fix_array(std::span<T> out) {
  if constexpr (std::endian::native == std::endian::big) {
    for (auto& v : out) v = to_le(v);
  }
}

}  // namespace

#define TPRA_READ_SCALAR(name, T) \
  T BinaryReader::name() {        \
    T v;                          \
    raw(&v, sizeof(T));           \
    return to_le(v);              \
  }
TPRA_READ_SCALAR(u8, std::uint8_t)
TPRA_READ_SCALAR(u32, std::uint32_t)
TPRA_READ_SCALAR(i32, std::int32_t)
TPRA_READ_SCALAR(u64, std::uint64_t)
TPRA_READ_SCALAR(f64, double)
#undef TPRA_READ_SCALAR

void BinaryReader::bytes(std::span<std::uint8_t> out) { raw(out.data(), out.size_bytes()); }
void BinaryReader::u32s(std::span<std::uint32_t> out) {
  raw(out.data(), out.size_bytes());
  fix_array(out);
}
void BinaryReader::i32s(std::span<std::int32_t> out) {
  raw(out.data(), out.size_bytes());
  fix_array(out);
}
void BinaryReader::u64s(std::span<std::uint64_t> out) {
  raw(out.data(), out.size_bytes());
  fix_array(out);
}
void BinaryReader::f64s(std::span<double> out) {
  raw(out.data(), out.size_bytes());
  fix_array(out);
}

std::uint64_t fnv1a64(std::span<const std::uint8_t> data, std::uint64_t h) {
  for (std::uint8_t b : data) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fnv1a64(const std::string& text) {
  return fnv1a64(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

struct HashingStream::Impl : std::streambuf {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  std::uint64_t n = 0;
  std::ostream os{this};

  int_type overflow(int_type ch) override {
    if (ch != traits_type::eof()) {
      const auto b = static_cast<std::uint8_t>(ch);
      h = fnv1a64(std::span(&b, 1), h);
      ++n;
    }
    return ch;
  }
  std::streamsize xsputn(const char* s, std::streamsize count) override {
    h = fnv1a64(std::span(reinterpret_cast<const std::uint8_t*>(s), static_cast<std::size_t>(count)), h);
    n += static_cast<std::uint64_t>(count);
    return count;
  }
};

HashingStream::HashingStream() : impl_(std::make_unique<Impl>()) {}
HashingStream::~HashingStream() = default;
std::ostream& HashingStream::stream() { return impl_->os; }
std::uint64_t HashingStream::digest() const { return impl_->h; }
std::uint64_t HashingStream::size() const { return impl_->n; }

}  // namespace tpra
