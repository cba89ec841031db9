#pragma once

// Internal: schema-checked reading of JSON objects with unknown-key tracking.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "smactr/canonical.hpp"
#include "smactr/diagnostic.hpp"

namespace smactr::detail {

class Sink {
 public:
  void add(std::string_view code, std::string path, std::string message) {
    diags_.push_back(make_diag(code, artifact_id, std::move(path), std::move(message)));
  }
  bool failed() const { return !diags_.empty(); }
  Diagnostics take() { return std::move(diags_); }

  std::string artifact_id;

 private:
  Diagnostics diags_;
};

enum class Need { required, optional };

inline std::string join_path(const std::string& base, std::string_view key) {
  return base.empty() ? std::string(key) : base + "." + std::string(key);
}

inline std::string index_path(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

inline std::string_view type_name(const json& j) { return j.type_name(); }

class ObjectReader {
 public:
  ObjectReader(const json& value, std::string path, Sink& sink)
      : value_(value), path_(std::move(path)), sink_(sink) {
    if (!value_.is_object()) {
      sink_.add("E_BAD_VALUE", path_, "expected object, found " + std::string(type_name(value_)));
      inert_ = true;
    }
  }

  ObjectReader(const ObjectReader&) = delete;
  ObjectReader& operator=(const ObjectReader&) = delete;

  ~ObjectReader() { finish(); }

  const std::string& path() const { return path_; }
  std::string child(std::string_view key) const { return join_path(path_, key); }

  /// Returns the value for `key`, or nullptr. A JSON null counts as absent.
  const json* get(std::string_view key, Need need) {
    if (inert_) return nullptr;
    consumed_.insert(std::string(key));
    auto it = value_.find(std::string(key));
    if (it == value_.end() || it->is_null()) {
      if (need == Need::required) sink_.add("E_MISSING_FIELD", child(key), "required field missing");
      return nullptr;
    }
    return &*it;
  }

  std::string text(std::string_view key, Need need = Need::required) {
    const json* v = get(key, need);
    if (!v) return {};
    if (!v->is_string()) {
      bad(key, "string", *v);
      return {};
    }
    return v->get<std::string>();
  }

  std::optional<std::string> opt_text(std::string_view key) {
    const json* v = get(key, Need::optional);
    if (!v) return std::nullopt;
    if (!v->is_string()) {
      bad(key, "string", *v);
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  std::optional<int> opt_int(std::string_view key, Need need = Need::optional) {
    const json* v = get(key, need);
    if (!v) return std::nullopt;
    if (!v->is_number_integer()) {
      bad(key, "integer", *v);
      return std::nullopt;
    }
    const auto wide = v->get<std::int64_t>();
    if (wide < INT32_MIN || wide > INT32_MAX) {
      sink_.add("E_BAD_VALUE", child(key), "integer out of representable range");
      return std::nullopt;
    }
    return static_cast<int>(wide);
  }

  int integer(std::string_view key) { return opt_int(key, Need::required).value_or(0); }

  double number(std::string_view key) {
    const json* v = get(key, Need::required);
    if (!v) return 0.0;
    if (!v->is_number()) {
      bad(key, "number", *v);
      return 0.0;
    }
    return v->get<double>();
  }

  std::vector<std::string> text_list(std::string_view key, Need need = Need::optional) {
    std::vector<std::string> out;
    const json* v = get(key, need);
    if (!v) return out;
    if (!v->is_array()) {
      bad(key, "array", *v);
      return out;
    }
    for (std::size_t i = 0; i < v->size(); ++i) {
      const json& e = (*v)[i];
      if (!e.is_string()) {
        sink_.add("E_BAD_VALUE", index_path(child(key), i), "expected string");
        continue;
      }
      out.push_back(e.get<std::string>());
    }
    return out;
  }

  template <class T, class Fn>
  std::vector<T> list(std::string_view key, Need need, Fn&& read_item) {
    std::vector<T> out;
    const json* v = get(key, need);
    if (!v) return out;
    if (!v->is_array()) {
      bad(key, "array", *v);
      return out;
    }
    for (std::size_t i = 0; i < v->size(); ++i) {
      out.push_back(read_item((*v)[i], index_path(child(key), i)));
    }
    return out;
  }

  template <class E>
  E enumeration(std::string_view key, std::optional<E> (*parse)(std::string_view), E fallback,
                Need need = Need::required) {
    return opt_enumeration(key, parse, need).value_or(fallback);
  }

  template <class E>
  std::optional<E> opt_enumeration(std::string_view key, std::optional<E> (*parse)(std::string_view),
                                   Need need = Need::optional) {
    const json* v = get(key, need);
    if (!v) return std::nullopt;
    if (!v->is_string()) {
      bad(key, "string", *v);
      return std::nullopt;
    }
    const auto s = v->get<std::string>();
    auto parsed = parse(s);
    if (!parsed) sink_.add("E_BAD_VALUE", child(key), "unknown value '" + s + "'");
    return parsed;
  }

  void finish() {
    if (inert_ || finished_) return;
    finished_ = true;
    for (auto it = value_.begin(); it != value_.end(); ++it) {
      if (!consumed_.count(it.key())) {
        sink_.add("E_UNKNOWN_FIELD", child(it.key()), "unknown field '" + it.key() + "'");
      }
    }
  }

 private:
  void bad(std::string_view key, std::string_view expected, const json& found) {
    sink_.add("E_BAD_VALUE", child(key),
              "expected " + std::string(expected) + ", found " + std::string(type_name(found)));
  }

  const json& value_;
  std::string path_;
  Sink& sink_;
  std::set<std::string> consumed_;
  bool inert_ = false;
  bool finished_ = false;
};

}  // namespace smactr::detail
