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

#include "evstereo/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

namespace evstereo {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T v{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError("invalid value '" + text + "' for " + key);
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError("invalid boolean '" + text + "' for " + key);
}

using Setter = std::function<void(PipelineConfig&, const std::string&, const std::string&)>;

template <typename T>
Setter number(T PipelineConfig::*field) {
  return [field](PipelineConfig& c, const std::string& k, const std::string& v) { c.*field = parse_number<T>(k, v); };
}

template <typename T>
Setter matcher(T MatcherConfig::*field) {
  return [field](PipelineConfig& c, const std::string& k, const std::string& v) {
    c.matcher.*field = parse_number<T>(k, v);
  };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table{
      {"window_radius", matcher(&MatcherConfig::window_radius)},
      {"d_min", matcher(&MatcherConfig::d_min)},
      {"d_max", matcher(&MatcherConfig::d_max)},
      {"lambda", matcher(&MatcherConfig::lambda)},
      {"min_overlap", matcher(&MatcherConfig::min_overlap)},
      {"levels", matcher(&MatcherConfig::levels)},
      {"scale", matcher(&MatcherConfig::scale)},
      {"support_radius", matcher(&MatcherConfig::support_radius)},
      {"support_tolerance", matcher(&MatcherConfig::support_tolerance)},
      {"support_count", matcher(&MatcherConfig::support_count)},
      {"fusion",
       [](PipelineConfig& c, const std::string& k, const std::string& v) {
         if (v == "average") {
           c.matcher.fusion = FusionPolicy::average;
         } else if (v == "prefer_local") {
           c.matcher.fusion = FusionPolicy::prefer_local;
         } else {
           throw ConfigError("invalid value '" + v + "' for " + k + " (average | prefer_local)");
         }
       }},
      {"mirror", [](PipelineConfig& c, const std::string& k, const std::string& v) { c.matcher.mirror = parse_bool(k, v); }},
      {"cutoff", [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.filter.cutoff = parse_number<double>(k, v);
       }},
      {"contrast", [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.filter.contrast = parse_number<double>(k, v);
       }},
      {"event_threshold", number(&PipelineConfig::event_threshold)},
      {"frame_threshold", number(&PipelineConfig::frame_threshold)},
      {"width", [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.geometry.width = parse_number<int>(k, v);
       }},
      {"height", [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.geometry.height = parse_number<int>(k, v);
       }},
      {"baseline", [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.rig.baseline = parse_number<double>(k, v);
       }},
      {"focal", [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.rig.focal = parse_number<double>(k, v);
       }},
      {"cx", [](PipelineConfig& c, const std::string& k, const std::string& v) { c.rig.cx = parse_number<double>(k, v); }},
      {"cy", [](PipelineConfig& c, const std::string& k, const std::string& v) { c.rig.cy = parse_number<double>(k, v); }},
      {"sample_time", [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.sample_time = parse_number<double>(k, v);
       }},
      {"margin", [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.margin = parse_number<int>(k, v);
       }},
      {"bad_abs", number(&PipelineConfig::bad_abs)},
      {"bad_rel", number(&PipelineConfig::bad_rel)},
      {"sequence", [](PipelineConfig& c, const std::string&, const std::string& v) { c.sequence = v; }},
  };
  return table;
}

}  // namespace

void PipelineConfig::validate() const {
  matcher.validate();
  if (!(filter.cutoff > 0.0)) throw ConfigError("cutoff must be > 0");
  if (!(filter.contrast > 0.0)) throw ConfigError("contrast must be > 0");
  if (!(event_threshold > 0.0 && event_threshold < 1.0)) throw ConfigError("event_threshold must be in (0, 1)");
  if (!(frame_threshold > 0.0 && frame_threshold < 1.0)) throw ConfigError("frame_threshold must be in (0, 1)");
  if (geometry.width <= 0 || geometry.height <= 0) throw ConfigError("sensor width and height must be > 0");
  rig.validate();
  if (margin && *margin < 0) throw ConfigError("margin must be >= 0");
  if (!(bad_abs >= 0.0) || !(bad_rel >= 0.0)) throw ConfigError("bad-pixel thresholds must be >= 0");
}

void apply_config_value(PipelineConfig& config, const std::string& key, const std::string& value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw ConfigError("unknown config key '" + key + "'");
  it->second(config, key, value);
}

PipelineConfig parse_config(std::istream& in, PipelineConfig base) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("config line " + std::to_string(number) + ": expected key = value", number, 0);
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    try {
      apply_config_value(base, key, value);
    } catch (const ConfigError& e) {
      throw ParseError("config line " + std::to_string(number) + ": " + e.what(), number, 0);
    }
  }
  return base;
}

PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  return parse_config(in, std::move(base));
}

void write_config(std::ostream& out, const PipelineConfig& c) {
  std::ostringstream s;
  s.precision(17);
  const auto& m = c.matcher;
  s << "window_radius = " << m.window_radius << "\n"
    << "d_min = " << m.d_min << "\n"
    << "d_max = " << m.d_max << "\n"
    << "lambda = " << m.lambda << "\n"
    << "min_overlap = " << m.min_overlap << "\n"
    << "levels = " << m.levels << "\n"
    << "scale = " << m.scale << "\n"
    << "fusion = " << (m.fusion == FusionPolicy::average ? "average" : "prefer_local") << "\n"
    << "support_radius = " << m.support_radius << "\n"
    << "support_tolerance = " << m.support_tolerance << "\n"
    << "support_count = " << m.support_count << "\n"
    << "mirror = " << (m.mirror ? "true" : "false") << "\n"
    << "cutoff = " << c.filter.cutoff << "\n"
    << "contrast = " << c.filter.contrast << "\n"
    << "event_threshold = " << c.event_threshold << "\n"
    << "frame_threshold = " << c.frame_threshold << "\n"
    << "width = " << c.geometry.width << "\n"
    << "height = " << c.geometry.height << "\n"
    << "baseline = " << c.rig.baseline << "\n"
    << "focal = " << c.rig.focal << "\n"
    << "cx = " << c.rig.cx << "\n"
    << "cy = " << c.rig.cy << "\n";
  if (c.sample_time) s << "sample_time = " << *c.sample_time << "\n";
  if (c.margin) s << "margin = " << *c.margin << "\n";
  s << "bad_abs = " << c.bad_abs << "\n"
    << "bad_rel = " << c.bad_rel << "\n"
    << "sequence = " << c.sequence << "\n";
  out << s.str();
}

}  // namespace evstereo
