// Copyright 2026 The evstereo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "evstereo/errors.hpp"

namespace evstereo {

/// One brightness-change sample. `t` is in seconds.
struct Event {
  double t = 0.0;
  int x = 0;
  int y = 0;
  int polarity = 1;  // +1 or -1

  friend bool operator==(const Event&, const Event&) = default;
};

/// Sensor extent in pixels. Defaults to a 640x480 VGA event sensor.
struct SensorGeometry {
  int width = 640;
  int height = 480;

  bool contains(int x, int y) const noexcept { return x >= 0 && y >= 0 && x < width && y < height; }
};

enum class EventLogFormat { csv, binary };

/// Size of one packed binary record: u64 t_us, u16 x, u16 y, i8 polarity.
inline constexpr std::size_t kBinaryEventRecordSize = 13;

// Readers throw RecordError for coordinates outside `geometry` and ParseError
// for malformed records. The result is stably sorted by timestamp.
//
// CSV: one `t_us,x,y,p` record per line, p in {0,1}. Blank lines and lines
// starting with '#' are skipped.
// Binary: packed little-endian records; polarity byte 1 is ON, 0 or -1 is OFF.
std::vector<Event> read_events_csv(std::istream& in, const SensorGeometry& geometry);
std::vector<Event> read_events_binary(std::istream& in, const SensorGeometry& geometry);

/// Format picked from the extension: `.bin`/`.raw` are binary, anything else CSV.
std::vector<Event> read_events(const std::filesystem::path& path, const SensorGeometry& geometry);
EventLogFormat format_for_path(const std::filesystem::path& path);

// Timestamps are written as integer microseconds (rounded to nearest).
void write_events_csv(std::ostream& out, std::span<const Event> events);
void write_events_binary(std::ostream& out, std::span<const Event> events);
void write_events(const std::filesystem::path& path, std::span<const Event> events);

}  // namespace evstereo
