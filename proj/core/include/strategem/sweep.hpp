#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "strategem/config.hpp"

namespace strategem {

// Grid file: one `key = v1 | v2 | ...` line per swept key. Grid points are the
// cartesian product, first key varying slowest.
struct SweepGrid {
  std::vector<std::pair<std::string, std::vector<std::string>>> axes;

  std::size_t size() const;
  // Assignment for grid point `id` (0-based).
  std::vector<std::pair<std::string, std::string>> point(std::size_t id) const;
};

SweepGrid parse_grid(std::istream& in);
SweepGrid load_grid(const std::string& path);

struct SweepRow {
  std::size_t id = 0;
  std::vector<std::string> values;  // one per grid axis
  std::size_t total_mistakes = 0;
  std::string lower_bound;  // empty when not applicable
  std::string upper_bound;
  std::string phi;
  std::size_t violations = 0;
  std::string status;  // "ok", "violations", or "error: ..."
};

// Runs every grid point on top of `base` with up to `jobs` games in flight.
// Rows come back sorted by id. A failing game is recorded in its row.
std::vector<SweepRow> run_sweep(const GameConfig& base, const SweepGrid& grid, std::size_t jobs = 1);

// Header `id,<keys>,total_mistakes,lower_bound,upper_bound,phi,violations,status`.
void write_sweep_csv(std::ostream& out, const SweepGrid& grid, const std::vector<SweepRow>& rows);

}  // namespace strategem
