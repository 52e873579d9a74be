#include "hierq/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "hierq/error.hpp"

namespace hierq::json_io {

namespace {

std::string format_double(double x) {
  if (!std::isfinite(x)) throw Error(ErrorCode::NonFinite, "cannot serialize non-finite number");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s(buf);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

bool is_scalar(const Json& j) { return !j.is_array() && !j.is_object(); }

void write_node(const Json& j, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) + 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        out += Json(key).dump();
        out += ": ";
        write_node(value, indent + 2, out);
      }
      out += "\n" + std::string(static_cast<std::size_t>(indent), ' ') + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      if (std::all_of(j.begin(), j.end(), is_scalar)) {
        out += "[";
        bool first = true;
        for (const auto& e : j) {
          if (!first) out += ", ";
          first = false;
          write_node(e, indent, out);
        }
        out += "]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        write_node(e, indent + 2, out);
      }
      out += "\n" + std::string(static_cast<std::size_t>(indent), ' ') + "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

Json parse_document(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    // e.byte is the 1-based offset of the offending character.
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(line) + ", column " + std::to_string(column) + ": malformed JSON");
  }
}

std::string to_canonical(const Json& doc) {
  std::string out;
  write_node(doc, 0, out);
  out += "\n";
  return out;
}

void schema_fail(std::string_view path, std::string_view what) {
  throw Error(ErrorCode::SchemaError,
              "at " + std::string(path.empty() ? "/" : path) + ": " + std::string(what));
}

ObjectReader::ObjectReader(const Json& node, std::string path) : node_(node), path_(std::move(path)) {
  if (!node_.is_object()) schema_fail(path_, "expected object");
}

std::string ObjectReader::child_path(std::string_view key) const {
  return path_ + "/" + std::string(key);
}

const Json& ObjectReader::required(std::string_view key) {
  const auto it = node_.find(std::string(key));
  if (it == node_.end()) schema_fail(path_, "missing key \"" + std::string(key) + "\"");
  seen_.emplace_back(key);
  return *it;
}

const Json* ObjectReader::optional(std::string_view key) {
  const auto it = node_.find(std::string(key));
  if (it == node_.end()) return nullptr;
  seen_.emplace_back(key);
  return &*it;
}

void ObjectReader::finish() const {
  for (const auto& [key, value] : node_.items()) {
    if (std::find(seen_.begin(), seen_.end(), key) == seen_.end()) {
      schema_fail(path_, "unknown key \"" + key + "\"");
    }
  }
}

std::int64_t read_int(const Json& node, std::string_view path) {
  if (node.is_number_unsigned()) {
    const auto u = node.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
      schema_fail(path, "integer out of range");
    }
    return static_cast<std::int64_t>(u);
  }
  if (!node.is_number_integer()) schema_fail(path, "expected integer");
  return node.get<std::int64_t>();
}

double read_double(const Json& node, std::string_view path) {
  if (!node.is_number()) schema_fail(path, "expected number");
  return node.get<double>();
}

std::string read_string(const Json& node, std::string_view path) {
  if (!node.is_string()) schema_fail(path, "expected string");
  return node.get<std::string>();
}

bool read_bool(const Json& node, std::string_view path) {
  if (!node.is_boolean()) schema_fail(path, "expected boolean");
  return node.get<bool>();
}

const Json& read_array(const Json& node, std::string_view path) {
  if (!node.is_array()) schema_fail(path, "expected array");
  return node;
}

Json encode_complex(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex decode_complex(const Json& node, std::string_view path) {
  if (!node.is_array() || node.size() != 2) schema_fail(path, "expected [re, im]");
  const std::string p(path);
  return {read_double(node[0], p + "/0"), read_double(node[1], p + "/1")};
}

Json encode_amplitudes(std::span<const Complex> amps) {
  Json out = Json::array();
  for (const auto& z : amps) out.push_back(encode_complex(z));
  return out;
}

std::vector<Complex> decode_amplitudes(const Json& node, std::string_view path) {
  read_array(node, path);
  std::vector<Complex> out;
  out.reserve(node.size());
  for (std::size_t i = 0; i < node.size(); ++i) {
    out.push_back(decode_complex(node[i], std::string(path) + "/" + std::to_string(i)));
  }
  return out;
}

Json encode_state(const StateVector& v) { return encode_amplitudes(v.amps()); }

StateVector decode_state(const Json& node, std::string_view path) {
  auto amps = decode_amplitudes(node, path);
  if (amps.empty()) schema_fail(path, "state vector must not be empty");
  if (amps.size() > kMaxDimension) schema_fail(path, "state vector exceeds dimension cap");
  return StateVector(std::move(amps));
}

Json encode_operator(const Operator& op) {
  Json out = Json::object();
  out["dim"] = op.dim();
  out["entries"] = encode_amplitudes(op.entries());
  return out;
}

Operator decode_operator(const Json& node, std::string_view path) {
  ObjectReader reader(node, std::string(path));
  const auto dim = read_int(reader.required("dim"), reader.child_path("dim"));
  auto entries = decode_amplitudes(reader.required("entries"), reader.child_path("entries"));
  reader.finish();
  if (dim <= 0 || static_cast<std::size_t>(dim) > kMaxDimension) {
    schema_fail(reader.child_path("dim"), "dim must be in [1, " + std::to_string(kMaxDimension) + "]");
  }
  const auto n = static_cast<std::size_t>(dim);
  if (entries.size() != n * n) schema_fail(reader.child_path("entries"), "expected dim*dim entries");
  return Operator(n, std::move(entries));
}

}  // namespace hierq::json_io
