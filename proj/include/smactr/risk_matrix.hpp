#pragma once

#include <array>

#include "smactr/diagnostic.hpp"
#include "smactr/types.hpp"

namespace smactr {

/// Severity x likelihood lookup table. cells[s-1][l-1] is the class for
/// severity s and likelihood l.
struct RiskMatrix {
  std::array<std::array<RiskClass, 5>, 5> cells{};

  /// high iff s*l >= 15 or s == 5; low iff s*l <= 4 and s <= 2; mid otherwise.
  static RiskMatrix standard();

  RiskClass at(int severity, int likelihood) const { return cells[severity - 1][likelihood - 1]; }

  /// Non-decreasing along both axes.
  bool is_monotone() const;

  bool operator==(const RiskMatrix&) const = default;
};

}  // namespace smactr
