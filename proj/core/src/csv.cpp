#include "mzsim/csv.hpp"

#include <cstdio>
#include <fstream>

#include "mzsim/errors.hpp"

namespace mzsim {

Series trace_series(const std::vector<DetectorTrace>& traces) {
  Series s;
  if (traces.empty()) return s;
  s.header.push_back("time_s");
  s.columns.push_back(traces.front().times);
  for (const auto& t : traces) {
    s.header.push_back("power_" + t.detector_id);
    s.columns.push_back(t.powers);
  }
  return s;
}

Series profile_series(const ScreenProfile& profile) {
  return Series{{"x_m", "intensity_rel"}, {profile.xs, profile.intensity}};
}

namespace {

std::string quote_field(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string format_csv(const Series& series) {
  if (series.header.empty() || series.rows() == 0) {
    throw DomainError("cannot write an empty series");
  }
  if (series.header.size() != series.columns.size()) {
    throw DomainError("series header and column count differ");
  }
  const std::size_t rows = series.rows();
  for (const auto& c : series.columns) {
    if (c.size() != rows) throw DomainError("series columns have different lengths");
  }

  std::string out;
  for (std::size_t j = 0; j < series.header.size(); ++j) {
    if (j > 0) out += ',';
    out += quote_field(series.header[j]);
  }
  out += '\n';
  char buf[32];
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < series.columns.size(); ++j) {
      if (j > 0) out += ',';
      std::snprintf(buf, sizeof buf, "%.9g", series.columns[j][i]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

void emit_csv(const Series& series, const std::filesystem::path& path) {
  const std::string text = format_csv(series);
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path.string() + "' for writing");
  file.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!file) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace mzsim
