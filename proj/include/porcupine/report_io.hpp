#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace porcupine {

// Locale-independent float formatting at 12 significant digits; all emitted
// documents use it so identical runs produce identical bytes.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "null";
  if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
  if (v == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

// Minimal JSON emitter with caller-controlled key order.
class JsonWriter {
 public:
  std::string str() const { return out_; }

  JsonWriter& begin_object() { return open('{'); }
  JsonWriter& end_object() { return close('}'); }
  JsonWriter& begin_array() { return open('['); }
  JsonWriter& end_array() { return close(']'); }

  JsonWriter& key(const std::string& k) {
    comma();
    emit_string(k);
    out_ += ':';
    pending_value_ = true;
    return *this;
  }

  JsonWriter& value(double v) { return scalar(format_double(v)); }
  JsonWriter& value(int v) { return scalar(std::to_string(v)); }
  JsonWriter& value(long v) { return scalar(std::to_string(v)); }
  JsonWriter& value(unsigned long v) { return scalar(std::to_string(v)); }
  JsonWriter& value(bool v) { return scalar(v ? "true" : "false"); }
  JsonWriter& value(const char* s) { return value(std::string(s)); }
  JsonWriter& value(const std::string& s) {
    comma();
    emit_string(s);
    pending_value_ = false;
    return *this;
  }
  JsonWriter& null_value() { return scalar("null"); }

 private:
  JsonWriter& open(char c) {
    comma();
    out_ += c;
    fresh_ = true;
    pending_value_ = false;
    return *this;
  }
  JsonWriter& close(char c) {
    out_ += c;
    fresh_ = false;
    return *this;
  }
  JsonWriter& scalar(const std::string& s) {
    comma();
    out_ += s;
    pending_value_ = false;
    return *this;
  }
  void comma() {
    if (pending_value_) return;  // value right after a key
    if (!fresh_ && !out_.empty() && out_.back() != '{' && out_.back() != '[') out_ += ',';
    fresh_ = false;
  }
  void emit_string(const std::string& s) {
    out_ += '"';
    for (char c : s) {
      switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\u%04x", c);
            out_ += buf;
          } else {
            out_ += c;
          }
      }
    }
    out_ += '"';
  }

  std::string out_;
  bool fresh_ = true;
  bool pending_value_ = false;
};

// CSV rows with the same float format.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out_ += ',';
      out_ += header[i];
    }
    out_ += '\n';
    columns_ = header.size();
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ += ',';
      out_ += cells[i];
    }
    out_ += '\n';
  }

  std::string str() const { return out_; }
  std::size_t columns() const { return columns_; }

 private:
  std::string out_;
  std::size_t columns_ = 0;
};

}  // namespace porcupine
