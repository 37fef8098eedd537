#include "zerofolio/serialize.hpp"

#include <stdexcept>
#include <utility>

#include "zerofolio/error.hpp"
#include "zerofolio/text.hpp"

namespace zerofolio {

std::vector<std::string> shuffle_lines(std::vector<std::string> lines, std::uint64_t seed) {
  SplitMix64 rng(seed);
  for (std::size_t i = lines.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(lines[i - 1], lines[j]);
  }
  return lines;
}

std::vector<std::string> instance_lines(const std::vector<std::string>& files) {
  std::vector<std::string> lines;
  for (const auto& file : files) {
    const std::string clean = text::sanitize_utf8(file);
    for (auto line : text::split_lines(clean)) lines.emplace_back(line);
  }
  return lines;
}

std::string serialize_instance(const std::vector<std::string>& files, const SerializationConfig& config) {
  if (files.empty()) throw Error(ErrorKind::InvalidArgument, "an instance needs at least one file");
  if (config.budget_chars < 1) throw Error(ErrorKind::InvalidArgument, "budget_chars must be >= 1");
  auto lines = instance_lines(files);
  if (config.shuffle) lines = shuffle_lines(std::move(lines), config.seed);

  std::string out;
  std::size_t scalars = 0;
  for (std::size_t i = 0; i < lines.size() && scalars < config.budget_chars; ++i) {
    if (i > 0) {
      out.push_back('\n');
      ++scalars;
      if (scalars == config.budget_chars) break;
    }
    auto piece = text::truncate_scalars(lines[i], config.budget_chars - scalars);
    scalars += text::count_scalars(piece);
    out.append(piece);
  }
  return out;
}

}  // namespace zerofolio
