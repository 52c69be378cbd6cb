#pragma once

// JSON helpers shared by the document readers and the experiment runner.

#include "oiglab/core.hpp"
#include "oiglab/errors.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace oiglab::detail {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

/// Parses text, reporting syntax errors with 1-based line and column.
Json parse_json(std::string_view text);

[[noreturn]] void schema_error(const std::string& path, const std::string& message);

const Json& require(const Json& object, const std::string& key, const std::string& path);

Rational rational_from(const Json& value, const std::string& path);
Label label_from(const Json& value, const std::string& path);
Point point_from(const Json& value, const std::string& path);
std::size_t count_from(const Json& value, const std::string& path);
std::string string_from(const Json& value, const std::string& path);

/// Two-space indented JSON with arrays of scalars kept on one line, plus a
/// trailing newline. Byte-stable for a given value.
std::string canonical_dump(const OrderedJson& value);

/// Integers as numbers, everything else as "p/q".
OrderedJson to_json(const Rational& q);
OrderedJson to_json(const Label& label);
OrderedJson to_json(const Point& x);

}  // namespace oiglab::detail
