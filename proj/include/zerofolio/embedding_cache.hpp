#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "zerofolio/embedding.hpp"

namespace zerofolio {

using Sha256Digest = std::array<std::uint8_t, 32>;

Sha256Digest sha256(std::string_view bytes);
std::string to_hex(const Sha256Digest& digest);

struct CacheKey {
  Sha256Digest content_hash{};
  std::string model_id;

  static CacheKey for_text(std::string_view serialized_text, std::string model_id);

  bool operator==(const CacheKey&) const = default;
};

/// `<store>/<hex(content_hash)>/<model_id>.vec`. Characters outside
/// [A-Za-z0-9._-] in the model id are written as %XX.
std::filesystem::path cache_path(const CacheKey& key, const std::filesystem::path& store);

/// Record layout: u32 D, D x f64, u32 CRC32 of the preceding bytes; all
/// little-endian.
std::string encode_record(const EmbeddingVector& vec);
EmbeddingVector decode_record(std::string_view bytes, const CacheKey& key);

/// Absent when no record exists. Throws Error(CacheCorrupt) when the record
/// fails length or checksum validation.
std::optional<EmbeddingVector> cache_get(const CacheKey& key, const std::filesystem::path& store);

/// Atomic write (temp file + rename).
void cache_put(const CacheKey& key, const EmbeddingVector& vec, const std::filesystem::path& store);

}  // namespace zerofolio
