#pragma once

#include <utility>
#include <variant>

namespace gradsum {

struct TypeError;

/// Value-or-error. Checking runs over millions of terms, so failures are
/// ordinary return values rather than exceptions.
template <class T, class E = TypeError>
class Outcome {
 public:
  Outcome(T value) : v_(std::move(value)) {}
  Outcome(E err) : v_(std::move(err)) {}

  bool ok() const { return v_.index() == 0; }
  explicit operator bool() const { return ok(); }
  const T& value() const { return std::get<0>(v_); }
  T& value() { return std::get<0>(v_); }
  const E& error() const { return std::get<1>(v_); }

 private:
  std::variant<T, E> v_;
};

}  // namespace gradsum
