#pragma once

#include <string>
#include <vector>

#include "qdspin/analysis.hpp"

namespace qdspin::io {

/// Shortest decimal form with 9 significant digits, locale-independent
/// ('.' separator); NaN renders as "nan".
std::string format_sig9(double value);

inline constexpr const char* kSweepHeader = "x,g_over_kappa,F_formula,F_sim,success_prob";

/// Renders rows as CSV: fixed header, one row per point, LF line endings,
/// every value through format_sig9. Byte-deterministic for given rows.
std::string sweep_to_csv(const std::vector<analysis::SweepRow>& rows);

/// Parses CSV produced by sweep_to_csv. Throws std::invalid_argument with
/// the offending line number on a wrong header, field count or number.
std::vector<analysis::SweepRow> parse_sweep_csv(const std::string& text);

/// Writes the CSV to a file; throws std::runtime_error if the path cannot
/// be opened or written.
void write_sweep_csv(const std::string& path, const std::vector<analysis::SweepRow>& rows);

std::vector<analysis::SweepRow> read_sweep_csv(const std::string& path);

}  // namespace qdspin::io
