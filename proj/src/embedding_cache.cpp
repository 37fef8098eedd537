#include "zerofolio/embedding_cache.hpp"

#include <openssl/evp.h>
#include <zlib.h>

#include <bit>
#include <cctype>
#include <cstring>

#include "zerofolio/error.hpp"
#include "zerofolio/text.hpp"

namespace zerofolio {

namespace fs = std::filesystem;

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32(std::string_view in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t{static_cast<unsigned char>(in[at + i])} << (8 * i);
  return v;
}

std::uint64_t get_u64(std::string_view in, std::size_t at) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{static_cast<unsigned char>(in[at + i])} << (8 * i);
  return v;
}

std::uint32_t crc32_of(std::string_view bytes) {
  return static_cast<std::uint32_t>(
      ::crc32(0L, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size())));
}

std::string encode_model_id(std::string_view id) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : id) {
    if (std::isalnum(c) || c == '.' || c == '_' || c == '-') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(hex[c >> 4]);
      out.push_back(hex[c & 0xF]);
    }
  }
  if (out.empty() || out == "." || out == "..") out = "%00" + out;
  return out;
}

}  // namespace

Sha256Digest sha256(std::string_view bytes) {
  Sha256Digest digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1 ||
      len != digest.size()) {
    throw Error(ErrorKind::Io, "SHA-256 computation failed");
  }
  return digest;
}

std::string to_hex(const Sha256Digest& digest) {
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(64);
  for (auto b : digest) {
    out.push_back(hex[b >> 4]);
    out.push_back(hex[b & 0xF]);
  }
  return out;
}

CacheKey CacheKey::for_text(std::string_view serialized_text, std::string model_id) {
  return CacheKey{sha256(serialized_text), std::move(model_id)};
}

fs::path cache_path(const CacheKey& key, const fs::path& store) {
  return store / to_hex(key.content_hash) / (encode_model_id(key.model_id) + ".vec");
}

std::string encode_record(const EmbeddingVector& vec) {
  std::string out;
  out.reserve(8 + 8 * vec.size());
  put_u32(out, static_cast<std::uint32_t>(vec.size()));
  for (double v : vec.values) put_u64(out, std::bit_cast<std::uint64_t>(v));
  put_u32(out, crc32_of(out));
  return out;
}

EmbeddingVector decode_record(std::string_view bytes, const CacheKey& key) {
  auto corrupt = [&](const char* why) {
    return Error(ErrorKind::CacheCorrupt, to_hex(key.content_hash) + "/" + key.model_id + ": " + why);
  };
  if (bytes.size() < 8) throw corrupt("record too short");
  const std::uint32_t dims = get_u32(bytes, 0);
  if (bytes.size() != 8 + std::size_t{8} * dims) throw corrupt("record length does not match dimension");
  if (crc32_of(bytes.substr(0, bytes.size() - 4)) != get_u32(bytes, bytes.size() - 4)) {
    throw corrupt("checksum mismatch");
  }
  std::vector<double> values(dims);
  for (std::uint32_t i = 0; i < dims; ++i) values[i] = std::bit_cast<double>(get_u64(bytes, 4 + 8 * std::size_t{i}));
  return EmbeddingVector(std::move(values));
}

std::optional<EmbeddingVector> cache_get(const CacheKey& key, const fs::path& store) {
  const auto path = cache_path(key, store);
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) return std::nullopt;
  return decode_record(text::read_file(path), key);
}

void cache_put(const CacheKey& key, const EmbeddingVector& vec, const fs::path& store) {
  const auto path = cache_path(key, store);
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create '" + path.parent_path().string() + "': " + ec.message());
  text::write_file_atomic(path, encode_record(vec));
}

}  // namespace zerofolio
