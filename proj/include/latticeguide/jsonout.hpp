#ifndef LATTICEGUIDE_JSONOUT_HPP
#define LATTICEGUIDE_JSONOUT_HPP

#include <cstdio>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace latticeguide {

// Minimal ordered JSON value with a canonical dump: compact layout, objects
// keep insertion order, doubles always print as %.12e. Reparsing and
// re-dumping a document reproduces it byte for byte.
class JsonValue {
 public:
  using Object = std::vector<std::pair<std::string, JsonValue>>;
  using Array = std::vector<JsonValue>;

  JsonValue() : v_(nullptr) {}
  JsonValue(std::nullptr_t) : v_(nullptr) {}
  JsonValue(bool b) : v_(b) {}
  JsonValue(double d) : v_(d) {}
  JsonValue(long long i) : v_(i) {}
  JsonValue(int i) : v_(static_cast<long long>(i)) {}
  JsonValue(const char* s) : v_(std::string(s)) {}
  JsonValue(std::string s) : v_(std::move(s)) {}
  JsonValue(Array a) : v_(std::move(a)) {}
  JsonValue(Object o) : v_(std::move(o)) {}

  static std::string format_double(double d) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12e", d);
    return buf;
  }

  void dump(std::string& out) const {
    struct V {
      std::string& out;
      void operator()(std::nullptr_t) const { out += "null"; }
      void operator()(bool b) const { out += b ? "true" : "false"; }
      void operator()(double d) const { out += format_double(d); }
      void operator()(long long i) const { out += std::to_string(i); }
      void operator()(const std::string& s) const {
        out += '"';
        for (char c : s) {
          switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
          }
        }
        out += '"';
      }
      void operator()(const Array& a) const {
        out += '[';
        for (std::size_t i = 0; i < a.size(); ++i) {
          if (i) out += ',';
          a[i].dump(out);
        }
        out += ']';
      }
      void operator()(const Object& o) const {
        out += '{';
        for (std::size_t i = 0; i < o.size(); ++i) {
          if (i) out += ',';
          V{out}(o[i].first);
          out += ':';
          o[i].second.dump(out);
        }
        out += '}';
      }
    };
    std::visit(V{out}, v_);
  }

  std::string dump() const {
    std::string out;
    dump(out);
    out += '\n';
    return out;
  }

 private:
  std::variant<std::nullptr_t, bool, double, long long, std::string, Array, Object> v_;
};

}  // namespace latticeguide

#endif  // LATTICEGUIDE_JSONOUT_HPP
