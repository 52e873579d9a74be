#pragma once

// JSON plumbing shared by the serializers and the CLI.
//
// Canonical text: two-space indentation, object keys in schema order,
// floating-point values with 17 significant digits, trailing newline.
// Input is read strictly: unknown keys and wrong types are rejected.

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>

#include <json.hpp>

#include "hierq/linalg.hpp"

namespace hierq::json_io {

using Json = nlohmann::ordered_json;

/// Throws Error(ParseError) carrying the 1-based line and column.
Json parse_document(std::string_view text);

std::string to_canonical(const Json& doc);

[[noreturn]] void schema_fail(std::string_view path, std::string_view what);

/// Strict view over a JSON object. Every key must be consumed through
/// `required`/`optional`; `finish` then rejects anything left over.
class ObjectReader {
 public:
  ObjectReader(const Json& node, std::string path);

  const Json& required(std::string_view key);
  const Json* optional(std::string_view key);
  std::string child_path(std::string_view key) const;
  void finish() const;

 private:
  const Json& node_;
  std::string path_;
  std::vector<std::string> seen_;
};

std::int64_t read_int(const Json& node, std::string_view path);
double read_double(const Json& node, std::string_view path);
std::string read_string(const Json& node, std::string_view path);
bool read_bool(const Json& node, std::string_view path);
const Json& read_array(const Json& node, std::string_view path);

Json encode_complex(Complex z);
Complex decode_complex(const Json& node, std::string_view path);

Json encode_amplitudes(std::span<const Complex> amps);
std::vector<Complex> decode_amplitudes(const Json& node, std::string_view path);

Json encode_state(const StateVector& v);
StateVector decode_state(const Json& node, std::string_view path);

/// {"dim": n, "entries": [[re, im], ...]} in row-major order.
Json encode_operator(const Operator& op);
Operator decode_operator(const Json& node, std::string_view path);

}  // namespace hierq::json_io
