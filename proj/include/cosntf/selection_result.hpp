#pragma once

#include <vector>

#include "cosntf/tensor.hpp"

namespace cosntf {

/// Output of every index selector: the coseparable core is A(I, J, :).
struct SelectionResult {
  IndexList I{Mode::horizontal, {}};
  IndexList J{Mode::lateral, {}};
  int outer_iterations = 0;
  bool converged = true;
  /// Stopping-criterion value after each outer iteration (alternating
  /// selector only).
  std::vector<double> history;
  /// Set when a t-DEIM step had to fall back to the pseudoinverse.
  bool deim_used_pinv = false;
};

}  // namespace cosntf
