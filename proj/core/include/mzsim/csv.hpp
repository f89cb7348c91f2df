#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mzsim/diffraction.hpp"
#include "mzsim/engine.hpp"

namespace mzsim {

/// Column-major table. All columns must have the same length.
struct Series {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

/// `time_s,power_<detector>...` in trace order.
Series trace_series(const std::vector<DetectorTrace>& traces);
/// `x_m,intensity_rel`.
Series profile_series(const ScreenProfile& profile);

/// Comma-separated text with a header row, LF line endings and 9 significant digits.
/// Throws DomainError for an empty or ragged series.
std::string format_csv(const Series& series);

/// Writes format_csv(series) to `path`. Nothing is written if formatting fails; throws IoError
/// when the file cannot be written.
void emit_csv(const Series& series, const std::filesystem::path& path);

}  // namespace mzsim
