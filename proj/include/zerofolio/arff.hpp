#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace zerofolio::arff {

enum class AttributeType { Numeric, String, Nominal, Date };

struct Attribute {
  std::string name;
  AttributeType type = AttributeType::Numeric;
  std::vector<std::string> nominal_values;  // only for Nominal

  bool operator==(const Attribute&) const = default;
};

/// The ARFF `?` marker.
struct Missing {
  bool operator==(const Missing&) const = default;
};

using Value = std::variant<Missing, double, std::string>;

inline bool is_missing(const Value& v) { return std::holds_alternative<Missing>(v); }

struct Relation {
  std::string name;
  std::vector<Attribute> attributes;
  std::vector<std::vector<Value>> rows;

  /// Index of the attribute named `name` (case-insensitive), or npos.
  std::size_t find_attribute(std::string_view name) const;

  bool operator==(const Relation&) const = default;
};

/// Parses a dense ARFF document. Throws MalformedArff with the offending line.
Relation parse(std::string_view text);

/// Writes `rel` as ARFF; `parse(write(rel)) == rel` for relations whose
/// numeric values are finite.
std::string write(const Relation& rel);

}  // namespace zerofolio::arff
