#pragma once

#include <optional>
#include <stdexcept>
#include <utility>

#include "smactr/diagnostic.hpp"

namespace smactr {

/// A value or the diagnostics explaining why there is none.
template <class T>
class Result {
 public:
  Result(T value) : value_(std::move(value)) {}  // NOLINT(google-explicit-constructor)
  Result(Diagnostics diags) : diags_(std::move(diags)) {  // NOLINT(google-explicit-constructor)
    if (diags_.empty()) throw std::logic_error("Result: failure without diagnostics");
  }
  Result(Diagnostic diag) : diags_{std::move(diag)} {}  // NOLINT(google-explicit-constructor)

  bool ok() const { return value_.has_value(); }
  explicit operator bool() const { return ok(); }

  const T& value() const& {
    if (!value_) throw std::logic_error("Result: no value (" + diags_.front().code + ")");
    return *value_;
  }
  T& value() & {
    if (!value_) throw std::logic_error("Result: no value (" + diags_.front().code + ")");
    return *value_;
  }
  T&& value() && {
    if (!value_) throw std::logic_error("Result: no value (" + diags_.front().code + ")");
    return std::move(*value_);
  }
  const T& operator*() const& { return value(); }
  const T* operator->() const { return &value(); }

  const Diagnostics& diagnostics() const { return diags_; }

 private:
  std::optional<T> value_;
  Diagnostics diags_;
};

}  // namespace smactr
