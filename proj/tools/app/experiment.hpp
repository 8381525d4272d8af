#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bullwhip/simulator.hpp"

namespace bullwhip::app {

/// Sweep of forecast window lengths applied to every echelon.
struct Grid {
  std::vector<int> m;  ///< lead-time windows (ProductOfMAs only)
  std::vector<int> n;  ///< demand / lead-time-demand windows
  bool empty() const { return m.empty() && n.empty(); }
};

/// Parsed experiment file.
///
/// JSON document; every object rejects keys it does not know. Required:
/// "demand", "echelons", "periods". See README for the full schema.
struct ExperimentFile {
  ChainConfig chain;
  std::size_t replications = 1;
  Grid grid;
  double compare_tolerance = 0.05;
};

/// Throws ConfigError with the JSON path of the offending field.
ExperimentFile parse_experiment(std::istream& in);
ExperimentFile load_experiment(const std::string& path);

struct GridCell {
  std::optional<int> m;
  std::optional<int> n;
  ChainConfig chain;
};

/// Expands the grid into one chain per (m, n) cell in row-major order (m
/// outer). Without a grid, returns the base chain as a single cell.
std::vector<GridCell> expand_grid(const ExperimentFile& file);

}  // namespace bullwhip::app
