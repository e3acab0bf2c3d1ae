#pragma once

#include <cstdint>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

namespace fatoulab {

/// Serialize a double with 17 significant digits so equal values always
/// produce equal bytes and round-trip exactly. Non-finite values are not
/// valid JSON numbers and are emitted by the writer as quoted strings.
inline std::string fmt_num(double v) {
  if (v == 0.0) return "0";  // collapse -0
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Minimal deterministic JSON emitter: insertion-ordered keys, fixed number
/// formatting, no whitespace variance.
class JsonWriter {
 public:
  void begin_object() {
    comma();
    out_ += '{';
    stack_.push_back(true);
  }
  void end_object() {
    out_ += '}';
    stack_.pop_back();
    mark_value();
  }
  void begin_array() {
    comma();
    out_ += '[';
    stack_.push_back(true);
  }
  void end_array() {
    out_ += ']';
    stack_.pop_back();
    mark_value();
  }
  void key(const std::string& k) {
    comma();
    write_string(k);
    out_ += ':';
    pending_key_ = true;
  }
  void value(double v) {
    comma();
    if (v != v) {
      write_string("nan");
    } else if (v == kInf) {
      write_string("inf");
    } else if (v == -kInf) {
      write_string("-inf");
    } else {
      out_ += fmt_num(v);
    }
    mark_value();
  }
  void value(std::int64_t v) {
    comma();
    out_ += std::to_string(v);
    mark_value();
  }
  void value(int v) { value(static_cast<std::int64_t>(v)); }
  void value(bool v) {
    comma();
    out_ += v ? "true" : "false";
    mark_value();
  }
  void value(const std::string& s) {
    comma();
    write_string(s);
    mark_value();
  }
  void value(const char* s) { value(std::string(s)); }
  void null() {
    comma();
    out_ += "null";
    mark_value();
  }

  template <typename T>
  void kv(const std::string& k, const T& v) {
    key(k);
    value(v);
  }

  const std::string& str() const { return out_; }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  void comma() {
    if (pending_key_) {
      pending_key_ = false;
      return;
    }
    if (!stack_.empty() && !stack_.back()) out_ += ',';
  }
  void mark_value() {
    if (!stack_.empty()) stack_.back() = false;
  }
  void write_string(const std::string& s) {
    out_ += '"';
    for (char c : s) {
      switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        case '\r': out_ += "\\r"; break;
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
  std::vector<bool> stack_;  // true = container still empty
  bool pending_key_ = false;
};

}  // namespace fatoulab
