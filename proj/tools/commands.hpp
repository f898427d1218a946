#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace maxrs::cli {

inline constexpr const char* kCsvHeader =
    "algorithm,n,B,M,range_or_diameter,io_sort,io_sweep,io_total,answer_value,wall_ms";

/// Runs one command line (without the program name). Returns the exit
/// status; reports go to `out`, diagnostics and usage to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Round-trippable rendering of a double (%.17g).
std::string format_number(double v);

}  // namespace maxrs::cli
