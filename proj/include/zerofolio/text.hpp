#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace zerofolio::text {

/// Splits on '\n', strips one trailing '\r' per line. A trailing newline does
/// not produce an empty final line; "" yields no lines.
std::vector<std::string_view> split_lines(std::string_view s);

/// Replaces every byte that is not part of a well-formed UTF-8 sequence
/// with U+FFFD.
std::string sanitize_utf8(std::string_view bytes);

/// Number of Unicode scalar values in well-formed UTF-8 `s`.
std::size_t count_scalars(std::string_view s);

/// Longest prefix of well-formed UTF-8 `s` holding at most `max_scalars`
/// scalar values.
std::string_view truncate_scalars(std::string_view s, std::size_t max_scalars);

/// Decodes well-formed UTF-8 into the byte ranges of its scalar values.
std::vector<std::string_view> scalars(std::string_view s);

/// Shortest round-trip decimal form of `v`.
std::string format_double(double v);

inline constexpr std::size_t kMaxFileBytes = std::size_t{256} << 20;

/// Reads a whole file. Throws Error(Io) when unreadable or larger than
/// `max_bytes`.
std::string read_file(const std::filesystem::path& path, std::size_t max_bytes = kMaxFileBytes);

/// Writes `contents` to a temp file next to `path` and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::vector<std::string> split(std::string_view s, char sep);

}  // namespace zerofolio::text
