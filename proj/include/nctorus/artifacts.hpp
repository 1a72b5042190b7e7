#pragma once

/// Deterministic artifact output: an insertion-ordered JSON value with fixed
/// floating-point formatting, FNV-1a configuration hashes, ISO-8601 UTC
/// timestamps, and small CSV helpers.  Artifacts produced from the same
/// configuration are byte-identical (timestamps can be omitted).

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "rational.hpp"

namespace nct {

// ---------------------------------------------------------------------------
// Ordered JSON with deterministic formatting
// ---------------------------------------------------------------------------

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12e", v);
  return buf;
}

class JsonValue {
 public:
  enum class Kind { Null, Bool, Int, Double, String, Array, Object };

  JsonValue() = default;
  static JsonValue null() { return JsonValue(); }
  static JsonValue boolean(bool b) {
    JsonValue v;
    v.kind_ = Kind::Bool;
    v.bool_ = b;
    return v;
  }
  static JsonValue integer(long long i) {
    JsonValue v;
    v.kind_ = Kind::Int;
    v.int_ = i;
    return v;
  }
  static JsonValue real(double d) {
    JsonValue v;
    v.kind_ = Kind::Double;
    v.double_ = d;
    return v;
  }
  static JsonValue str(std::string s) {
    JsonValue v;
    v.kind_ = Kind::String;
    v.string_ = std::move(s);
    return v;
  }
  static JsonValue array() {
    JsonValue v;
    v.kind_ = Kind::Array;
    return v;
  }
  static JsonValue object() {
    JsonValue v;
    v.kind_ = Kind::Object;
    return v;
  }

  Kind kind() const { return kind_; }

  JsonValue& push(JsonValue v) {
    items_.push_back(std::move(v));
    return *this;
  }
  JsonValue& set(const std::string& key, JsonValue v) {
    keys_.push_back(key);
    items_.push_back(std::move(v));
    return *this;
  }

  /// Compact when indent < 0, pretty-printed otherwise.
  std::string dump(int indent = 2) const {
    std::ostringstream os;
    write(os, indent, 0);
    return os.str();
  }

 private:
  static void escape(std::ostream& os, const std::string& s) {
    os << '"';
    for (unsigned char c : s) {
      switch (c) {
        case '"': os << "\\\""; break;
        case '\\': os << "\\\\"; break;
        case '\n': os << "\\n"; break;
        case '\r': os << "\\r"; break;
        case '\t': os << "\\t"; break;
        default:
          if (c < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\u%04x", c);
            os << buf;
          } else {
            os << c;
          }
      }
    }
    os << '"';
  }

  void write(std::ostream& os, int indent, int depth) const {
    const std::string pad = indent < 0 ? "" : std::string(std::size_t(indent) * (depth + 1), ' ');
    const std::string padEnd = indent < 0 ? "" : std::string(std::size_t(indent) * depth, ' ');
    const char* nl = indent < 0 ? "" : "\n";
    const char* colon = indent < 0 ? ":" : ": ";
    switch (kind_) {
      case Kind::Null: os << "null"; break;
      case Kind::Bool: os << (bool_ ? "true" : "false"); break;
      case Kind::Int: os << int_; break;
      case Kind::Double: os << format_double(double_); break;
      case Kind::String: escape(os, string_); break;
      case Kind::Array: {
        if (items_.empty()) {
          os << "[]";
          break;
        }
        os << '[' << nl;
        for (std::size_t i = 0; i < items_.size(); ++i) {
          os << pad;
          items_[i].write(os, indent, depth + 1);
          if (i + 1 < items_.size()) os << ',';
          os << nl;
        }
        os << padEnd << ']';
        break;
      }
      case Kind::Object: {
        if (items_.empty()) {
          os << "{}";
          break;
        }
        os << '{' << nl;
        for (std::size_t i = 0; i < items_.size(); ++i) {
          os << pad;
          escape(os, keys_[i]);
          os << colon;
          items_[i].write(os, indent, depth + 1);
          if (i + 1 < items_.size()) os << ',';
          os << nl;
        }
        os << padEnd << '}';
        break;
      }
    }
  }

  Kind kind_ = Kind::Null;
  bool bool_ = false;
  long long int_ = 0;
  double double_ = 0.0;
  std::string string_;
  std::vector<std::string> keys_;   // objects only, insertion order
  std::vector<JsonValue> items_;    // array elements or object values
};

/// Deterministic conversion from a parsed nlohmann value (whose objects are
/// key-sorted) into the ordered writer.
inline JsonValue from_nlohmann(const nlohmann::json& j) {
  using nlohmann::json;
  switch (j.type()) {
    case json::value_t::null: return JsonValue::null();
    case json::value_t::boolean: return JsonValue::boolean(j.get<bool>());
    case json::value_t::number_integer: return JsonValue::integer(j.get<long long>());
    case json::value_t::number_unsigned:
      return JsonValue::integer(static_cast<long long>(j.get<unsigned long long>()));
    case json::value_t::number_float: return JsonValue::real(j.get<double>());
    case json::value_t::string: return JsonValue::str(j.get<std::string>());
    case json::value_t::array: {
      JsonValue a = JsonValue::array();
      for (const auto& e : j) a.push(from_nlohmann(e));
      return a;
    }
    case json::value_t::object: {
      JsonValue o = JsonValue::object();
      for (auto it = j.begin(); it != j.end(); ++it) o.set(it.key(), from_nlohmann(it.value()));
      return o;
    }
    default: return JsonValue::null();
  }
}

// ---------------------------------------------------------------------------
// Config hashing and timestamps
// ---------------------------------------------------------------------------

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// Hash of the compact rendering of a configuration object.
inline std::string config_hash(const JsonValue& config) {
  return hex64(fnv1a64(config.dump(-1)));
}

inline std::string iso_utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Standard artifact skeleton: kind, configuration, its hash, and (unless
/// suppressed) a generation timestamp.
inline JsonValue artifact_envelope(const std::string& kind, JsonValue config,
                                   bool withTimestamp) {
  JsonValue root = JsonValue::object();
  root.set("artifact", JsonValue::str(kind));
  root.set("config_hash", JsonValue::str(config_hash(config)));
  if (withTimestamp) root.set("timestamp", JsonValue::str(iso_utc_now()));
  root.set("config", std::move(config));
  return root;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

struct CsvRow {
  std::vector<std::string> cells;
  CsvRow& add(const std::string& s) {
    cells.push_back(csv_escape(s));
    return *this;
  }
  CsvRow& add(const char* s) { return add(std::string(s)); }
  CsvRow& add(long long v) {
    cells.push_back(std::to_string(v));
    return *this;
  }
  CsvRow& add(int v) { return add(static_cast<long long>(v)); }
  CsvRow& add(double v) {
    cells.push_back(format_double(v));
    return *this;
  }
  CsvRow& add(const Rational& r) { return add(r.str()); }
};

inline void write_csv_row(std::ostream& os, const CsvRow& row) {
  for (std::size_t i = 0; i < row.cells.size(); ++i) {
    if (i) os << ',';
    os << row.cells[i];
  }
  os << '\n';
}

// ---------------------------------------------------------------------------
// File output
// ---------------------------------------------------------------------------

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw config_error("cannot open output file '" + path + "'");
  os << content;
  if (!os) throw config_error("failed writing output file '" + path + "'");
}

}  // namespace nct
