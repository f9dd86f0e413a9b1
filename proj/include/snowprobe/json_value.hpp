#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace snowprobe {

// Output documents must be byte-identical across runs and thread counts:
// object keys are emitted sorted and reals with 17 significant digits.
// Parsing of input documents uses the vendored nlohmann library instead;
// this type only exists to pin down the emission format.
class JsonValue {
 public:
  enum class Kind { Null, Bool, Int, Real, Str, Arr, Obj };

  JsonValue() : kind_(Kind::Null) {}
  JsonValue(bool b) : kind_(Kind::Bool), bool_(b) {}
  JsonValue(int v) : kind_(Kind::Int), int_(v) {}
  JsonValue(std::int64_t v) : kind_(Kind::Int), int_(v) {}
  JsonValue(std::uint64_t v) : kind_(Kind::Int), int_(static_cast<std::int64_t>(v)) {}
  JsonValue(double v) : kind_(Kind::Real), real_(v) {}
  JsonValue(const char* s) : kind_(Kind::Str), str_(s) {}
  JsonValue(std::string s) : kind_(Kind::Str), str_(std::move(s)) {}

  static JsonValue array();
  static JsonValue object();

  // Reals that may legitimately be infinite (critical exponents) are
  // emitted as the string "inf".
  static JsonValue real_or_inf(double v);

  Kind kind() const { return kind_; }
  bool is_obj() const { return kind_ == Kind::Obj; }

  void push_back(JsonValue v);
  JsonValue& operator[](const std::string& key);

  std::string dump(int indent = 0) const;

 private:
  Kind kind_;
  bool bool_ = false;
  std::int64_t int_ = 0;
  double real_ = 0.0;
  std::string str_;
  std::vector<JsonValue> arr_;
  std::map<std::string, JsonValue> obj_;

  void write(std::string& out, int indent, int depth) const;
};

std::string format_real(double v);

}  // namespace snowprobe
