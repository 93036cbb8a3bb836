// JSON and CSV serialization with fixed float formatting.
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace jbessel {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Doubles as %.17g, non-finite values as null, keys in insertion order.
std::string dump_json(const Json& value, int indent = 2);

/// %.17g, or "inf" / "-inf" / "nan".
std::string format_double(double x);

/// RFC 4180 field: quoted when it holds a comma, quote, CR or LF.
std::string csv_field(std::string_view s);

/// Joins fields with commas and terminates the record with CRLF.
std::string csv_row(const std::vector<std::string>& fields);

}  // namespace jbessel
