#include "zerofolio/arff.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <optional>

#include "zerofolio/error.hpp"
#include "zerofolio/text.hpp"

namespace zerofolio::arff {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool starts_with_keyword(std::string_view line, std::string_view keyword) {
  if (line.size() < keyword.size()) return false;
  if (lower(line.substr(0, keyword.size())) != keyword) return false;
  return line.size() == keyword.size() ||
         std::isspace(static_cast<unsigned char>(line[keyword.size()]));
}

/// Splits a comma-separated list honoring ' and " quoting with backslash
/// escapes. Returns tokens plus whether each token was quoted.
struct Token {
  std::string text;
  bool quoted = false;
};

std::vector<Token> split_values(std::string_view line, std::size_t line_no, char separator = ',') {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = line.size();
  while (true) {
    while (i < n && (line[i] == ' ' || line[i] == '\t')) ++i;
    Token tok;
    if (i < n && (line[i] == '\'' || line[i] == '"')) {
      const char quote = line[i++];
      bool closed = false;
      while (i < n) {
        char c = line[i++];
        if (c == '\\' && i < n) {
          char e = line[i++];
          switch (e) {
            case 'n': tok.text.push_back('\n'); break;
            case 't': tok.text.push_back('\t'); break;
            case 'r': tok.text.push_back('\r'); break;
            default: tok.text.push_back(e); break;
          }
        } else if (c == quote) {
          closed = true;
          break;
        } else {
          tok.text.push_back(c);
        }
      }
      if (!closed) throw MalformedArff(line_no, "unterminated quote");
      tok.quoted = true;
      while (i < n && (line[i] == ' ' || line[i] == '\t')) ++i;
      if (i < n && line[i] != separator) throw MalformedArff(line_no, "text after closing quote");
    } else {
      std::size_t start = i;
      while (i < n && line[i] != separator) ++i;
      tok.text = std::string(trim(line.substr(start, i - start)));
    }
    out.push_back(std::move(tok));
    if (i >= n) break;
    ++i;  // skip separator
  }
  return out;
}

/// Reads one possibly quoted identifier from the front of `rest`.
std::string take_name(std::string_view& rest, std::size_t line_no) {
  rest = trim(rest);
  if (rest.empty()) throw MalformedArff(line_no, "missing name");
  std::string name;
  if (rest.front() == '\'' || rest.front() == '"') {
    const char quote = rest.front();
    std::size_t i = 1;
    bool closed = false;
    while (i < rest.size()) {
      char c = rest[i++];
      if (c == '\\' && i < rest.size()) {
        name.push_back(rest[i++]);
      } else if (c == quote) {
        closed = true;
        break;
      } else {
        name.push_back(c);
      }
    }
    if (!closed) throw MalformedArff(line_no, "unterminated quote");
    rest.remove_prefix(i);
  } else {
    std::size_t i = 0;
    while (i < rest.size() && !std::isspace(static_cast<unsigned char>(rest[i])) && rest[i] != '{')
      ++i;
    name = std::string(rest.substr(0, i));
    rest.remove_prefix(i);
  }
  return name;
}

Attribute parse_attribute(std::string_view rest, std::size_t line_no) {
  Attribute attr;
  attr.name = take_name(rest, line_no);
  rest = trim(rest);
  if (rest.empty()) throw MalformedArff(line_no, "missing type for attribute '" + attr.name + "'");
  if (rest.front() == '{') {
    auto close = rest.rfind('}');
    if (close == std::string_view::npos) throw MalformedArff(line_no, "unterminated nominal list");
    attr.type = AttributeType::Nominal;
    auto body = trim(rest.substr(1, close - 1));
    if (!body.empty()) {
      for (auto& tok : split_values(body, line_no)) attr.nominal_values.push_back(tok.text);
    }
    return attr;
  }
  std::string type = lower(rest);
  if (type == "numeric" || type == "real" || type == "integer") {
    attr.type = AttributeType::Numeric;
  } else if (type == "string") {
    attr.type = AttributeType::String;
  } else if (type.rfind("date", 0) == 0) {
    attr.type = AttributeType::Date;
  } else {
    throw MalformedArff(line_no, "unknown attribute type '" + std::string(rest) + "'");
  }
  return attr;
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  std::string low = lower(s);
  if (low == "inf" || low == "infinity") return std::numeric_limits<double>::infinity();
  if (low == "-inf" || low == "-infinity") return -std::numeric_limits<double>::infinity();
  if (low == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

bool needs_quoting(const std::string& s) {
  if (s.empty() || s == "?") return true;
  for (char c : s) {
    if (c == ',' || c == '\'' || c == '"' || c == '\\' || c == '%' || c == '{' || c == '}' ||
        std::isspace(static_cast<unsigned char>(c)))
      return true;
  }
  return false;
}

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    switch (c) {
      case '\'': out += "\\'"; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  out.push_back('\'');
  return out;
}

std::string maybe_quote(const std::string& s) { return needs_quoting(s) ? quote(s) : s; }

}  // namespace

std::size_t Relation::find_attribute(std::string_view wanted) const {
  const std::string w = lower(wanted);
  for (std::size_t i = 0; i < attributes.size(); ++i) {
    if (lower(attributes[i].name) == w) return i;
  }
  return static_cast<std::size_t>(-1);
}

Relation parse(std::string_view text) {
  Relation rel;
  bool in_data = false;
  std::size_t line_no = 0;
  for (std::string_view raw : text::split_lines(text)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '%') continue;
    if (!in_data) {
      if (line.front() != '@') throw MalformedArff(line_no, "expected a header declaration");
      if (starts_with_keyword(line, "@relation")) {
        std::string_view rest = line.substr(9);
        rel.name = take_name(rest, line_no);
      } else if (starts_with_keyword(line, "@attribute")) {
        rel.attributes.push_back(parse_attribute(line.substr(10), line_no));
      } else if (starts_with_keyword(line, "@data")) {
        if (rel.attributes.empty()) throw MalformedArff(line_no, "@data before any @attribute");
        in_data = true;
      } else {
        throw MalformedArff(line_no, "unknown declaration '" + std::string(line) + "'");
      }
      continue;
    }
    if (line.front() == '{') throw MalformedArff(line_no, "sparse data rows are not supported");
    auto tokens = split_values(line, line_no);
    if (tokens.size() != rel.attributes.size()) {
      throw MalformedArff(line_no, "row has " + std::to_string(tokens.size()) + " values, expected " +
                                       std::to_string(rel.attributes.size()));
    }
    std::vector<Value> row;
    row.reserve(tokens.size());
    for (std::size_t c = 0; c < tokens.size(); ++c) {
      const auto& tok = tokens[c];
      if (!tok.quoted && tok.text == "?") {
        row.emplace_back(Missing{});
        continue;
      }
      const auto& attr = rel.attributes[c];
      if (attr.type == AttributeType::Numeric) {
        auto v = parse_number(tok.text);
        if (!v) {
          throw MalformedArff(line_no, "non-numeric value '" + tok.text + "' for attribute '" +
                                           attr.name + "'");
        }
        row.emplace_back(*v);
      } else {
        row.emplace_back(tok.text);
      }
    }
    rel.rows.push_back(std::move(row));
  }
  if (rel.attributes.empty()) throw MalformedArff(line_no, "no attributes declared");
  if (!in_data) throw MalformedArff(line_no, "missing @data section");
  return rel;
}

std::string write(const Relation& rel) {
  std::string out = "@RELATION " + maybe_quote(rel.name.empty() ? "relation" : rel.name) + "\n\n";
  for (const auto& attr : rel.attributes) {
    out += "@ATTRIBUTE " + maybe_quote(attr.name) + " ";
    switch (attr.type) {
      case AttributeType::Numeric: out += "NUMERIC"; break;
      case AttributeType::String: out += "STRING"; break;
      case AttributeType::Date: out += "DATE"; break;
      case AttributeType::Nominal: {
        out += "{";
        for (std::size_t i = 0; i < attr.nominal_values.size(); ++i) {
          if (i) out += ",";
          out += maybe_quote(attr.nominal_values[i]);
        }
        out += "}";
        break;
      }
    }
    out += "\n";
  }
  out += "\n@DATA\n";
  for (const auto& row : rel.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ",";
      const auto& v = row[c];
      if (is_missing(v)) {
        out += "?";
      } else if (auto d = std::get_if<double>(&v)) {
        out += text::format_double(*d);
      } else {
        out += maybe_quote(std::get<std::string>(v));
      }
    }
    out += "\n";
  }
  return out;
}

}  // namespace zerofolio::arff
