#pragma once

// Historian CSV ingestion: parse, clean and type-coerce an export into a
// validated SensorFrame.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pdm {

struct Channel {
  std::string name;
  std::vector<double> values;
  std::string unit;

  bool operator==(const Channel&) const = default;
};

// Timestamped multi-channel table. Timestamps are integer seconds since the
// Unix epoch (UTC), strictly increasing; every value is finite.
struct SensorFrame {
  std::vector<std::int64_t> timestamps;
  std::vector<Channel> channels;

  std::size_t n_rows() const noexcept { return timestamps.size(); }
  const Channel* find(std::string_view name) const noexcept;

  // Throws ValidationError if an invariant does not hold.
  void validate() const;

  bool operator==(const SensorFrame&) const = default;
};

// One channel projected out of a frame.
struct Series {
  std::string name;
  std::string unit;
  std::vector<std::int64_t> timestamps;
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }

  bool operator==(const Series&) const = default;
};

struct IngestConfig {
  // A cell whose trimmed text equals one of these drops its whole row.
  std::vector<std::string> sentinel_tokens{"Bad Input"};
  // Tried in order per row. "iso8601" is a keyword; other entries are
  // patterns over the tokens d (day), m (month), yyyy, h (hour), mm (minute)
  // and ss (second), with every other character matched literally.
  std::vector<std::string> timestamp_formats{"iso8601", "d/m/yyyy h:mm:ss", "d/m/yyyy h:mm"};
  // Header names to skip entirely (e.g. a text label column).
  std::vector<std::string> exclude_columns{};

  void validate() const;
};

struct IngestReport {
  std::size_t rows_read = 0;
  std::size_t rows_dropped_sentinel = 0;
  std::size_t rows_dropped_unparseable = 0;
  std::size_t channels_retained = 0;
  std::size_t n_rows = 0;

  bool operator==(const IngestReport&) const = default;
};

struct IngestResult {
  SensorFrame frame;
  IngestReport report;
};

IngestResult load_historian_csv(const std::filesystem::path& path, const IngestConfig& config = {});

// Same as load_historian_csv over in-memory text. `source` names the input in
// error messages.
IngestResult parse_historian_csv(std::string_view text, const IngestConfig& config = {},
                                 std::string_view source = "<memory>");

Series select_channel(const SensorFrame& frame, std::string_view name);

// "kPa" for pressure transmitters (names containing "PIT"), otherwise "".
std::string default_unit_for(std::string_view channel_name);

std::optional<std::int64_t> parse_timestamp(std::string_view text, std::string_view format);
std::string format_timestamp_iso(std::int64_t epoch_seconds);

// Civil date/time (UTC) to epoch seconds.
std::int64_t epoch_from_civil(int year, int month, int day, int hour, int minute, int second);

// Writes the frame in the ingest CSV format: `Timestamp` first (ISO-8601),
// one column per channel, shortest round-trip numbers, LF line endings.
void write_historian_csv(std::ostream& out, const SensorFrame& frame);
std::string to_historian_csv(const SensorFrame& frame);

SensorFrame frame_from_series(const Series& series);

}  // namespace pdm
