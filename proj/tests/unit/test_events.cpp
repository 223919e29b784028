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

#include <gtest/gtest.h>

#include <sstream>

#include "evstereo/events.hpp"

using namespace evstereo;

TEST(EventCsv, EmptyInputGivesNoEvents) {
  std::istringstream in("");
  EXPECT_TRUE(read_events_csv(in, {}).empty());
}

TEST(EventCsv, ParsesRecordsInOrder) {
  std::istringstream in("# t_us,x,y,p\n10,1,2,1\n20,3,4,0\n\n30,639,479,1\n");
  const auto ev = read_events_csv(in, {});
  ASSERT_EQ(ev.size(), 3u);
  EXPECT_EQ(ev[0], (Event{10e-6, 1, 2, 1}));
  EXPECT_EQ(ev[1], (Event{20e-6, 3, 4, -1}));
  EXPECT_EQ(ev[2], (Event{30e-6, 639, 479, 1}));
}

TEST(EventCsv, OutOfBoundsRecordNamesLine) {
  std::istringstream in("10,1,2,1\n20,640,4,0\n");
  try {
    read_events_csv(in, {});
    FAIL() << "expected RecordError";
  } catch (const RecordError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(EventCsv, MalformedRecordsAreParseErrors) {
  for (const char* text : {"10,1,2\n", "10,1,2,1,5\n", "abc,1,2,1\n", "10,1,2,2\n", "10,-1,2,1\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(read_events_csv(in, {}), ParseError) << text;
  }
}

TEST(EventCsv, UnorderedInputIsStablySorted) {
  std::istringstream in("30,0,0,1\n10,1,0,1\n10,2,0,0\n");
  const auto ev = read_events_csv(in, {});
  ASSERT_EQ(ev.size(), 3u);
  EXPECT_EQ(ev[0].x, 1);
  EXPECT_EQ(ev[1].x, 2);
  EXPECT_EQ(ev[2].x, 0);
}

TEST(EventCsv, RoundTrip) {
  const std::vector<Event> ev{{0.000001, 5, 6, 1}, {0.25, 7, 8, -1}, {1.5, 0, 0, 1}};
  std::stringstream s;
  write_events_csv(s, ev);
  EXPECT_EQ(read_events_csv(s, {}), ev);
}

TEST(EventBinary, RoundTripAndRecordSize) {
  const std::vector<Event> ev{{0.000001, 5, 6, 1}, {0.25, 639, 479, -1}};
  std::stringstream s;
  write_events_binary(s, ev);
  EXPECT_EQ(s.str().size(), 2 * kBinaryEventRecordSize);
  EXPECT_EQ(read_events_binary(s, {}), ev);
}

TEST(EventBinary, TruncatedRecordReportsOffset) {
  std::stringstream s;
  const std::vector<Event> ev{{1.0, 1, 1, 1}, {2.0, 2, 2, 1}};
  write_events_binary(s, ev);
  std::string bytes = s.str();
  bytes.pop_back();
  std::istringstream in(bytes);
  try {
    read_events_binary(in, {});
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), kBinaryEventRecordSize);
  }
}

TEST(EventBinary, OutOfBoundsIsRecordError) {
  std::stringstream s;
  const std::vector<Event> ev{{1.0, 100, 1, 1}};
  write_events_binary(s, ev);
  EXPECT_THROW(read_events_binary(s, SensorGeometry{64, 48}), RecordError);
}

TEST(EventFormat, PickedFromExtension) {
  EXPECT_EQ(format_for_path("a.bin"), EventLogFormat::binary);
  EXPECT_EQ(format_for_path("a.raw"), EventLogFormat::binary);
  EXPECT_EQ(format_for_path("a.csv"), EventLogFormat::csv);
  EXPECT_EQ(format_for_path("a.txt"), EventLogFormat::csv);
}
