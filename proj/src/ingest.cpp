#include "pdm/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "pdm/error.hpp"
#include "pdm/util.hpp"

namespace pdm {
namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// Splits one CSV record. Double quotes delimit fields that may contain commas;
// "" inside a quoted field is a literal quote.
std::vector<std::string> split_record(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::optional<double> parse_number(std::string_view cell) {
  cell = trim(cell);
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || ptr != cell.data() + cell.size()) return std::nullopt;
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

// Reads 1..max_digits decimal digits.
bool read_int(std::string_view s, std::size_t& pos, std::size_t min_digits, std::size_t max_digits, int& out) {
  std::size_t n = 0;
  int v = 0;
  while (pos + n < s.size() && n < max_digits && s[pos + n] >= '0' && s[pos + n] <= '9') {
    v = v * 10 + (s[pos + n] - '0');
    ++n;
  }
  if (n < min_digits) return false;
  pos += n;
  out = v;
  return true;
}

bool valid_civil(int y, int mo, int d, int h, int mi, int s) {
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (mo < 1 || mo > 12 || d < 1 || h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 || s > 59) return false;
  const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
  const int dim = kDays[mo - 1] + (mo == 2 && leap ? 1 : 0);
  return d <= dim;
}

std::optional<std::int64_t> parse_iso8601(std::string_view s) {
  std::size_t pos = 0;
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
  if (!read_int(s, pos, 4, 4, y) || pos >= s.size() || s[pos++] != '-') return std::nullopt;
  if (!read_int(s, pos, 2, 2, mo) || pos >= s.size() || s[pos++] != '-') return std::nullopt;
  if (!read_int(s, pos, 2, 2, d)) return std::nullopt;
  if (pos < s.size()) {
    if (s[pos] != 'T' && s[pos] != ' ') return std::nullopt;
    ++pos;
    if (!read_int(s, pos, 2, 2, h) || pos >= s.size() || s[pos++] != ':') return std::nullopt;
    if (!read_int(s, pos, 2, 2, mi)) return std::nullopt;
    if (pos < s.size() && s[pos] == ':') {
      ++pos;
      if (!read_int(s, pos, 2, 2, sec)) return std::nullopt;
    }
    if (pos < s.size() && s[pos] == 'Z') ++pos;
  }
  if (pos != s.size() || !valid_civil(y, mo, d, h, mi, sec)) return std::nullopt;
  return epoch_from_civil(y, mo, d, h, mi, sec);
}

std::optional<std::int64_t> parse_pattern(std::string_view s, std::string_view fmt) {
  int y = -1, mo = -1, d = -1, h = 0, mi = 0, sec = 0;
  std::size_t pos = 0;
  std::size_t f = 0;
  while (f < fmt.size()) {
    const std::string_view rest = fmt.substr(f);
    if (rest.starts_with("yyyy")) {
      if (!read_int(s, pos, 4, 4, y)) return std::nullopt;
      f += 4;
    } else if (rest.starts_with("mm")) {
      if (!read_int(s, pos, 2, 2, mi)) return std::nullopt;
      f += 2;
    } else if (rest.starts_with("ss")) {
      if (!read_int(s, pos, 2, 2, sec)) return std::nullopt;
      f += 2;
    } else if (rest.front() == 'd') {
      if (!read_int(s, pos, 1, 2, d)) return std::nullopt;
      f += 1;
    } else if (rest.front() == 'm') {
      if (!read_int(s, pos, 1, 2, mo)) return std::nullopt;
      f += 1;
    } else if (rest.front() == 'h') {
      if (!read_int(s, pos, 1, 2, h)) return std::nullopt;
      f += 1;
    } else {
      if (pos >= s.size() || s[pos] != rest.front()) return std::nullopt;
      ++pos;
      ++f;
    }
  }
  if (pos != s.size() || y < 0 || mo < 0 || d < 0 || !valid_civil(y, mo, d, h, mi, sec)) return std::nullopt;
  return epoch_from_civil(y, mo, d, h, mi, sec);
}

std::string context(std::string_view source, std::size_t line, std::size_t column) {
  std::ostringstream ss;
  ss << source << ": line " << line;
  if (column > 0) ss << ", column " << column;
  return ss.str();
}

}  // namespace

const Channel* SensorFrame::find(std::string_view name) const noexcept {
  for (const auto& c : channels) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

void SensorFrame::validate() const {
  for (std::size_t i = 1; i < timestamps.size(); ++i) {
    if (timestamps[i] <= timestamps[i - 1]) {
      throw ValidationError("SensorFrame: timestamps not strictly increasing at row " + std::to_string(i));
    }
  }
  for (const auto& c : channels) {
    if (c.values.size() != timestamps.size()) {
      throw ValidationError("SensorFrame: channel '" + c.name + "' has " + std::to_string(c.values.size()) +
                            " values for " + std::to_string(timestamps.size()) + " rows");
    }
    for (double v : c.values) {
      if (!std::isfinite(v)) throw ValidationError("SensorFrame: channel '" + c.name + "' has a non-finite value");
    }
  }
}

void IngestConfig::validate() const {
  if (timestamp_formats.empty()) throw ValidationError("IngestConfig: at least one timestamp format is required");
}

std::int64_t epoch_from_civil(int year, int month, int day, int hour, int minute, int second) {
  // Days from civil, proleptic Gregorian (H. Hinnant's algorithm).
  const int y = year - (month <= 2 ? 1 : 0);
  const int era = (y >= 0 ? y : y - 399) / 400;
  const int yoe = y - era * 400;
  const int mp = (month + 9) % 12;
  const int doy = (153 * mp + 2) / 5 + day - 1;
  const int doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  const std::int64_t days = static_cast<std::int64_t>(era) * 146097 + doe - 719468;
  return days * 86400 + hour * 3600 + minute * 60 + second;
}

std::string format_timestamp_iso(std::int64_t t) {
  std::int64_t days = t >= 0 ? t / 86400 : (t - 86399) / 86400;
  std::int64_t secs = t - days * 86400;
  // Civil from days (inverse of epoch_from_civil).
  days += 719468;
  const std::int64_t era = (days >= 0 ? days : days - 146096) / 146097;
  const std::int64_t doe = days - era * 146097;
  const std::int64_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const std::int64_t mp = (5 * doy + 2) / 153;
  const std::int64_t d = doy - (153 * mp + 2) / 5 + 1;
  const std::int64_t m = mp < 10 ? mp + 3 : mp - 9;
  const std::int64_t y = yoe + era * 400 + (m <= 2 ? 1 : 0);
  char buf[96];
  std::snprintf(buf, sizeof buf, "%04lld-%02lld-%02lldT%02lld:%02lld:%02lld", static_cast<long long>(y),
                static_cast<long long>(m), static_cast<long long>(d), static_cast<long long>(secs / 3600),
                static_cast<long long>((secs / 60) % 60), static_cast<long long>(secs % 60));
  return buf;
}

std::optional<std::int64_t> parse_timestamp(std::string_view text, std::string_view format) {
  text = trim(text);
  if (format == "iso8601") return parse_iso8601(text);
  return parse_pattern(text, format);
}

std::string default_unit_for(std::string_view channel_name) {
  return channel_name.find("PIT") != std::string_view::npos ? "kPa" : "";
}

IngestResult parse_historian_csv(std::string_view text, const IngestConfig& config, std::string_view source) {
  config.validate();
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  const auto lines = split_lines(text);
  std::size_t header_line = 0;
  while (header_line < lines.size() && trim(lines[header_line]).empty()) ++header_line;
  if (header_line == lines.size()) throw ValidationError(std::string(source) + ": empty file");

  const auto header = split_record(lines[header_line]);
  if (header.size() < 2) {
    throw ValidationError(context(source, header_line + 1, 0) + ": header needs a timestamp column and at least one channel");
  }

  // Map retained CSV columns to frame channels.
  std::vector<std::ptrdiff_t> column_to_channel(header.size(), -1);
  IngestResult result;
  auto& frame = result.frame;
  for (std::size_t c = 1; c < header.size(); ++c) {
    const std::string name(trim(header[c]));
    if (name.empty()) throw ValidationError(context(source, header_line + 1, c + 1) + ": empty channel name");
    if (std::find(config.exclude_columns.begin(), config.exclude_columns.end(), name) != config.exclude_columns.end()) {
      continue;
    }
    if (frame.find(name) != nullptr) {
      throw ValidationError(context(source, header_line + 1, c + 1) + ": duplicate channel name '" + name + "'");
    }
    column_to_channel[c] = static_cast<std::ptrdiff_t>(frame.channels.size());
    frame.channels.push_back(Channel{name, {}, default_unit_for(name)});
  }

  auto& report = result.report;
  std::vector<double> row_values(frame.channels.size());
  for (std::size_t li = header_line + 1; li < lines.size(); ++li) {
    if (trim(lines[li]).empty()) continue;
    ++report.rows_read;
    const auto fields = split_record(lines[li]);

    const bool has_sentinel = std::any_of(fields.begin(), fields.end(), [&](const std::string& f) {
      const auto t = trim(f);
      return std::find(config.sentinel_tokens.begin(), config.sentinel_tokens.end(), t) != config.sentinel_tokens.end();
    });
    if (has_sentinel) {
      ++report.rows_dropped_sentinel;
      continue;
    }
    if (fields.size() != header.size()) {
      ++report.rows_dropped_unparseable;
      continue;
    }

    bool numeric = true;
    for (std::size_t c = 1; c < fields.size() && numeric; ++c) {
      if (column_to_channel[c] < 0) continue;
      const auto v = parse_number(fields[c]);
      if (!v) {
        numeric = false;
      } else {
        row_values[static_cast<std::size_t>(column_to_channel[c])] = *v;
      }
    }
    if (!numeric) {
      ++report.rows_dropped_unparseable;
      continue;
    }

    std::optional<std::int64_t> ts;
    for (const auto& fmt : config.timestamp_formats) {
      ts = parse_timestamp(fields[0], fmt);
      if (ts) break;
    }
    if (!ts) {
      throw ValidationError(context(source, li + 1, 1) + ": timestamp '" + std::string(trim(fields[0])) +
                            "' matches none of the configured formats");
    }
    if (!frame.timestamps.empty() && *ts <= frame.timestamps.back()) {
      throw ValidationError(context(source, li + 1, 1) +
                            (*ts == frame.timestamps.back() ? ": duplicate timestamp " : ": timestamp goes backwards ") +
                            std::string(trim(fields[0])));
    }
    frame.timestamps.push_back(*ts);
    for (std::size_t k = 0; k < row_values.size(); ++k) frame.channels[k].values.push_back(row_values[k]);
  }

  if (report.rows_read == 0) throw ValidationError(std::string(source) + ": header-only file (no data rows)");
  report.n_rows = frame.n_rows();
  report.channels_retained = frame.channels.size();
  frame.validate();
  return result;
}

IngestResult load_historian_csv(const std::filesystem::path& path, const IngestConfig& config) {
  const std::string text = read_file(path);
  return parse_historian_csv(text, config, path.string());
}

Series select_channel(const SensorFrame& frame, std::string_view name) {
  const Channel* c = frame.find(name);
  if (c == nullptr) {
    std::string names;
    for (const auto& ch : frame.channels) {
      if (!names.empty()) names += ", ";
      names += ch.name;
    }
    throw ValidationError("unknown channel '" + std::string(name) + "'; available: " + names);
  }
  return Series{c->name, c->unit, frame.timestamps, c->values};
}

void write_historian_csv(std::ostream& out, const SensorFrame& frame) {
  out << "Timestamp";
  for (const auto& c : frame.channels) out << ',' << c.name;
  out << '\n';
  for (std::size_t r = 0; r < frame.n_rows(); ++r) {
    out << format_timestamp_iso(frame.timestamps[r]);
    for (const auto& c : frame.channels) out << ',' << format_double(c.values[r]);
    out << '\n';
  }
}

std::string to_historian_csv(const SensorFrame& frame) {
  std::ostringstream ss;
  write_historian_csv(ss, frame);
  return ss.str();
}

SensorFrame frame_from_series(const Series& series) {
  SensorFrame f;
  f.timestamps = series.timestamps;
  f.channels.push_back(Channel{series.name, series.values,
                               series.unit.empty() ? default_unit_for(series.name) : series.unit});
  f.validate();
  return f;
}

}  // namespace pdm
