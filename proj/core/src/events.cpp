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

#include "evstereo/events.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "evstereo/errors.hpp"

namespace evstereo {
namespace {

constexpr double kPerSecond = 1e6;  // timestamps are integer microseconds

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename Int>
bool parse_int(std::string_view field, Int& out) {
  field = trim(field);
  if (field.empty()) return false;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
  return ec == std::errc{} && ptr == field.data() + field.size();
}

void sort_by_time(std::vector<Event>& events) {
  std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.t < b.t; });
}

std::int64_t to_microseconds(double t) { return static_cast<std::int64_t>(std::llround(t * kPerSecond)); }

}  // namespace

std::vector<Event> read_events_csv(std::istream& in, const SensorGeometry& geometry) {
  std::vector<Event> events;
  std::string line;
  std::size_t line_no = 0;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t record_offset = offset;
    offset += line.size() + 1;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;

    std::array<std::string_view, 4> fields;
    std::size_t n = 0;
    for (std::string_view rest = body;; ++n) {
      const auto comma = rest.find(',');
      if (n < fields.size()) fields[n] = rest.substr(0, comma);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    ++n;
    const auto where = " at line " + std::to_string(line_no);
    if (n != fields.size()) {
      throw ParseError("event CSV: expected 4 fields `t_us,x,y,p`" + where, line_no, record_offset);
    }

    std::int64_t t_us = 0;
    int x = 0, y = 0, p = 0;
    if (!parse_int(fields[0], t_us) || !parse_int(fields[1], x) || !parse_int(fields[2], y) ||
        !parse_int(fields[3], p)) {
      throw ParseError("event CSV: non-integer field" + where, line_no, record_offset);
    }
    if (t_us < 0) throw ParseError("event CSV: negative timestamp" + where, line_no, record_offset);
    if (p != 0 && p != 1) throw ParseError("event CSV: polarity must be 0 or 1" + where, line_no, record_offset);
    if (!geometry.contains(x, y)) {
      throw RecordError("event CSV: coordinate (" + std::to_string(x) + "," + std::to_string(y) +
                            ") outside " + std::to_string(geometry.width) + "x" +
                            std::to_string(geometry.height) + " sensor" + where,
                        line_no, record_offset);
    }
    events.push_back({static_cast<double>(t_us) / kPerSecond, x, y, p == 1 ? 1 : -1});
  }
  sort_by_time(events);
  return events;
}

std::vector<Event> read_events_binary(std::istream& in, const SensorGeometry& geometry) {
  std::vector<Event> events;
  std::array<unsigned char, kBinaryEventRecordSize> rec{};
  std::size_t index = 0;
  while (true) {
    in.read(reinterpret_cast<char*>(rec.data()), rec.size());
    const auto got = static_cast<std::size_t>(in.gcount());
    const std::size_t offset = index * kBinaryEventRecordSize;
    if (got == 0) break;
    if (got != rec.size()) {
      throw ParseError("event binary: truncated record " + std::to_string(index) + " at byte offset " +
                           std::to_string(offset),
                       index + 1, offset);
    }
    std::uint64_t t_us = 0;
    for (int b = 7; b >= 0; --b) t_us = (t_us << 8) | rec[static_cast<std::size_t>(b)];
    const int x = rec[8] | (rec[9] << 8);
    const int y = rec[10] | (rec[11] << 8);
    const auto pol = static_cast<std::int8_t>(rec[12]);
    if (pol != 1 && pol != 0 && pol != -1) {
      throw ParseError("event binary: bad polarity byte in record " + std::to_string(index), index + 1, offset);
    }
    if (!geometry.contains(x, y)) {
      throw RecordError("event binary: record " + std::to_string(index) + " at byte offset " +
                            std::to_string(offset) + " has coordinate (" + std::to_string(x) + "," +
                            std::to_string(y) + ") outside the sensor",
                        index + 1, offset);
    }
    events.push_back({static_cast<double>(t_us) / kPerSecond, x, y, pol == 1 ? 1 : -1});
    ++index;
  }
  sort_by_time(events);
  return events;
}

EventLogFormat format_for_path(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  return (ext == ".bin" || ext == ".raw") ? EventLogFormat::binary : EventLogFormat::csv;
}

std::vector<Event> read_events(const std::filesystem::path& path, const SensorGeometry& geometry) {
  const auto format = format_for_path(path);
  std::ifstream in(path, format == EventLogFormat::binary ? std::ios::binary : std::ios::in);
  if (!in) throw IoError("cannot open event log " + path.string());
  return format == EventLogFormat::binary ? read_events_binary(in, geometry) : read_events_csv(in, geometry);
}

void write_events_csv(std::ostream& out, std::span<const Event> events) {
  for (const auto& e : events) {
    out << to_microseconds(e.t) << ',' << e.x << ',' << e.y << ',' << (e.polarity > 0 ? 1 : 0) << '\n';
  }
}

void write_events_binary(std::ostream& out, std::span<const Event> events) {
  std::array<unsigned char, kBinaryEventRecordSize> rec{};
  for (const auto& e : events) {
    auto t_us = static_cast<std::uint64_t>(to_microseconds(e.t));
    for (std::size_t b = 0; b < 8; ++b) {
      rec[b] = static_cast<unsigned char>(t_us & 0xff);
      t_us >>= 8;
    }
    rec[8] = static_cast<unsigned char>(e.x & 0xff);
    rec[9] = static_cast<unsigned char>((e.x >> 8) & 0xff);
    rec[10] = static_cast<unsigned char>(e.y & 0xff);
    rec[11] = static_cast<unsigned char>((e.y >> 8) & 0xff);
    rec[12] = static_cast<unsigned char>(static_cast<std::int8_t>(e.polarity > 0 ? 1 : -1));
    out.write(reinterpret_cast<const char*>(rec.data()), rec.size());
  }
}

void write_events(const std::filesystem::path& path, std::span<const Event> events) {
  const auto format = format_for_path(path);
  std::ofstream out(path, format == EventLogFormat::binary ? std::ios::binary : std::ios::out);
  if (!out) throw IoError("cannot write event log " + path.string());
  if (format == EventLogFormat::binary) {
    write_events_binary(out, events);
  } else {
    write_events_csv(out, events);
  }
}

}  // namespace evstereo
