#include "strategem/sweep.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <thread>

#include "strategem/csv.hpp"
#include "strategem/errors.hpp"
#include "strategem/verify.hpp"

namespace strategem {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

std::string number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

SweepRow run_point(const GameConfig& base, const SweepGrid& grid, std::size_t id) {
  SweepRow row;
  row.id = id;
  GameConfig cfg = base;
  for (auto& [key, value] : grid.point(id)) {
    row.values.push_back(value);
    try {
      cfg.set(key, value);
    } catch (const std::exception& e) {
      row.status = std::string("error: ") + e.what();
      return row;
    }
  }
  try {
    auto setup = build_game(cfg);
    if (setup.phi) row.phi = std::to_string(*setup.phi);
    if (auto lb = setup.environment->certified_lower_bound()) row.lower_bound = number(*lb);
    const auto& H = *setup.H;
    if (setup.learner_name == "alg1") {
      row.upper_bound = number(weighted_expert_bound(setup.graph->max_degrees(), ldim(H)));
    } else if (setup.learner_name == "alg2") {
      row.upper_bound = std::to_string(2 * H.size());
    } else if (setup.learner_name == "alg3" && setup.phi) {
      if (setup.inner_learner == "alg1") {
        row.upper_bound =
            number(static_cast<double>(*setup.phi) * weighted_expert_bound(setup.graph->max_degrees(), ldim(H)));
      } else if (setup.inner_learner == "alg2") {
        row.upper_bound = std::to_string(*setup.phi * 2 * H.size());
      }
    }
    const auto report = verify_game(setup);
    row.total_mistakes = report.transcript.total_mistakes;
    for (const auto& r : report.results) row.violations += r.status == CheckStatus::kFail ? 1 : 0;
    row.status = row.violations == 0 ? "ok" : "violations";
  } catch (const std::exception& e) {
    row.status = std::string("error: ") + e.what();
  }
  return row;
}

}  // namespace

std::size_t SweepGrid::size() const {
  if (axes.empty()) return 0;
  std::size_t n = 1;
  for (const auto& [_, values] : axes) n *= values.size();
  return n;
}

std::vector<std::pair<std::string, std::string>> SweepGrid::point(std::size_t id) const {
  std::vector<std::pair<std::string, std::string>> out(axes.size());
  for (std::size_t a = axes.size(); a-- > 0;) {
    const auto& values = axes[a].second;
    out[a] = {axes[a].first, values[id % values.size()]};
    id /= values.size();
  }
  return out;
}

SweepGrid parse_grid(std::istream& in) {
  SweepGrid grid;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("grid line " + std::to_string(line_no) + ": expected key = v1 | v2");
    std::vector<std::string> values;
    std::stringstream ss(line.substr(eq + 1));
    std::string v;
    while (std::getline(ss, v, '|')) {
      v = trim(v);
      if (v.empty()) throw ConfigError("grid line " + std::to_string(line_no) + ": empty value");
      values.push_back(v);
    }
    if (values.empty()) throw ConfigError("grid line " + std::to_string(line_no) + ": no values");
    grid.axes.emplace_back(trim(line.substr(0, eq)), std::move(values));
  }
  return grid;
}

SweepGrid load_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open grid '" + path + "'");
  return parse_grid(in);
}

std::vector<SweepRow> run_sweep(const GameConfig& base, const SweepGrid& grid, std::size_t jobs) {
  const auto n = grid.size();
  std::vector<SweepRow> rows(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (auto id = next++; id < n; id = next++) rows[id] = run_point(base, grid, id);
  };
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return rows;
}

void write_sweep_csv(std::ostream& out, const SweepGrid& grid, const std::vector<SweepRow>& rows) {
  std::vector<std::string> header{"id"};
  for (const auto& [key, _] : grid.axes) header.push_back(key);
  for (const char* h : {"total_mistakes", "lower_bound", "upper_bound", "phi", "violations", "status"}) {
    header.emplace_back(h);
  }
  write_csv_row(out, header);
  for (const auto& r : rows) {
    std::vector<std::string> fields{std::to_string(r.id)};
    fields.insert(fields.end(), r.values.begin(), r.values.end());
    fields.push_back(std::to_string(r.total_mistakes));
    fields.push_back(r.lower_bound);
    fields.push_back(r.upper_bound);
    fields.push_back(r.phi);
    fields.push_back(std::to_string(r.violations));
    fields.push_back(r.status);
    write_csv_row(out, fields);
  }
}

}  // namespace strategem
