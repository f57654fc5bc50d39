#include "strategem/csv.hpp"

#include <ostream>
#include <stdexcept>

namespace strategem {

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out << ',';
    out << csv_field(fields[i]);
  }
  out << '\n';
}

void write_transcript_csv(std::ostream& out, const GameTranscript& transcript) {
  out << kTranscriptHeader << '\n';
  for (const auto& r : transcript.rows) {
    write_csv_row(out, {std::to_string(r.t), std::to_string(r.x), std::to_string(r.v), std::to_string(r.y),
                        std::to_string(r.prediction), r.mistake ? "1" : "0", std::to_string(r.cumulative),
                        r.diag.dump()});
  }
}

std::vector<std::string> parse_csv_row(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw std::invalid_argument("unterminated quote in CSV row");
  fields.push_back(std::move(cur));
  return fields;
}

}  // namespace strategem
