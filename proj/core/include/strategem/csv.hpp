#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "strategem/game.hpp"

namespace strategem {

inline constexpr std::string_view kTranscriptHeader = "t,x,v,y,pred,mistake,cum_mistakes,diag_json";

// RFC 4180 quoting when the field contains a comma, quote or newline.
std::string csv_field(std::string_view s);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

void write_transcript_csv(std::ostream& out, const GameTranscript& transcript);

// Splits one CSV record (no embedded newlines) into fields.
std::vector<std::string> parse_csv_row(std::string_view line);

}  // namespace strategem
