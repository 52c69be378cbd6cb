#include "json_util.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <stdexcept>

namespace oiglab::detail {

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    const std::size_t pos = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    const auto head = text.substr(0, pos);
    const std::size_t line = 1 + static_cast<std::size_t>(std::count(head.begin(), head.end(), '\n'));
    const auto last_newline = head.rfind('\n');
    const std::size_t column = last_newline == std::string_view::npos ? pos + 1 : pos - last_newline;
    // nlohmann prefixes its own location; keep only the description.
    std::string what = e.what();
    if (const auto colon = what.find(": "); colon != std::string::npos) {
      what = what.substr(colon + 2);
    }
    throw ParseError(what, line, column);
  }
}

void schema_error(const std::string& path, const std::string& message) {
  throw ParseError(path + ": " + message, 0, 0);
}

const Json& require(const Json& object, const std::string& key, const std::string& path) {
  if (!object.is_object()) schema_error(path, "expected an object");
  const auto it = object.find(key);
  if (it == object.end()) schema_error(path, "missing field \"" + key + "\"");
  return *it;
}

Rational rational_from(const Json& value, const std::string& path) {
  try {
    if (value.is_number_integer()) {
      if (value.is_number_unsigned() &&
          value.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
        schema_error(path, "integer out of range");
      }
      return Rational(value.get<std::int64_t>());
    }
    if (value.is_number_float()) {
      // Shortest round-trip text of the double, read back exactly.
      char buffer[64];
      const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, value.get<double>());
      if (ec != std::errc()) schema_error(path, "unrepresentable number");
      return parse_rational(std::string_view(buffer, static_cast<std::size_t>(end - buffer)));
    }
    if (value.is_string()) return parse_rational(value.get<std::string>());
  } catch (const std::invalid_argument& e) {
    schema_error(path, e.what());
  }
  schema_error(path, "expected a rational number");
}

Label label_from(const Json& value, const std::string& path) {
  if (value.is_string()) {
    try {
      return Label::parse(value.get<std::string>());
    } catch (const std::invalid_argument& e) {
      schema_error(path, e.what());
    }
  }
  return Label(rational_from(value, path));
}

Point point_from(const Json& value, const std::string& path) {
  if (!value.is_array() || value.empty()) schema_error(path, "expected a nonempty coordinate array");
  Point x;
  for (std::size_t k = 0; k < value.size(); ++k) {
    x.push_back(rational_from(value[k], path + "[" + std::to_string(k) + "]"));
  }
  return x;
}

std::size_t count_from(const Json& value, const std::string& path) {
  if (!value.is_number_integer() || value.get<std::int64_t>() < 0) {
    schema_error(path, "expected a nonnegative integer");
  }
  return value.get<std::size_t>();
}

std::string string_from(const Json& value, const std::string& path) {
  if (!value.is_string()) schema_error(path, "expected a string");
  return value.get<std::string>();
}

namespace {

void write_inline(const OrderedJson& value, std::string& out) {
  if (!value.is_array()) {
    out += value.dump();
    return;
  }
  out += "[";
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (i > 0) out += ", ";
    write_inline(value[i], out);
  }
  out += "]";
}

void write(const OrderedJson& value, std::size_t depth, std::string& out) {
  const auto pad = [&out](std::size_t d) { out.append(2 * d, ' '); };
  if (value.is_object()) {
    if (value.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    std::size_t i = 0;
    for (const auto& [key, item] : value.items()) {
      pad(depth + 1);
      out += OrderedJson(key).dump() + ": ";
      write(item, depth + 1, out);
      out += ++i < value.size() ? ",\n" : "\n";
    }
    pad(depth);
    out += "}";
    return;
  }
  if (value.is_array()) {
    const bool flat = std::none_of(value.begin(), value.end(), [](const OrderedJson& v) {
      return v.is_object() || (v.is_array() && !v.empty() && !v.front().is_primitive());
    });
    if (flat) {
      // Scalars and arrays of scalars stay on one line.
      write_inline(value, out);
      return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < value.size(); ++i) {
      pad(depth + 1);
      write(value[i], depth + 1, out);
      out += i + 1 < value.size() ? ",\n" : "\n";
    }
    pad(depth);
    out += "]";
    return;
  }
  out += value.dump();
}

}  // namespace

std::string canonical_dump(const OrderedJson& value) {
  std::string out;
  write(value, 0, out);
  return out + "\n";
}

OrderedJson to_json(const Rational& q) {
  if (q.denominator() == 1) return q.numerator();
  return to_string(q);
}

OrderedJson to_json(const Label& label) { return to_json(label.value()); }

OrderedJson to_json(const Point& x) {
  auto out = OrderedJson::array();
  for (const auto& c : x) out.push_back(to_json(c));
  return out;
}

}  // namespace oiglab::detail
