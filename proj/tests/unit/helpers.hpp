#pragma once

#include <vector>

#include "obm/simulate.hpp"

inline obm::PathGrid make_path(std::vector<double> values, double T) {
  obm::PathGrid p;
  p.T = T;
  p.N = values.size() - 1;
  p.values = std::move(values);
  return p;
}
