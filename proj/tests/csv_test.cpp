// Copyright 2026 The SearchRef DEA Authors
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


#include "dea/csv.hpp"

#include <gtest/gtest.h>

#include <sstream>

#include "dea/datagen.hpp"
#include "test_support.hpp"

namespace dea {
namespace {

Dataset parse(const std::string& text, int m, int n) {
  std::istringstream in(text);
  return read_dataset_csv(in, m, n);
}

std::size_t error_line(const std::string& text, int m, int n) {
  try {
    parse(text, m, n);
  } catch (const CsvError& e) {
    return e.line();
  }
  ADD_FAILURE() << "expected a CsvError";
  return 0;
}

TEST(ReadDatasetCsv, ParsesPeer) {
  const Dataset d = parse("id,x1,y1\r\nA,1,1\nB,2,1\n\nC,2,3\nD,4,3\n", 1, 1);
  EXPECT_EQ(d, testing::four_dmu_peer());
}

TEST(ReadDatasetCsv, ErrorsCarryLineNumbers) {
  EXPECT_EQ(error_line("", 1, 1), 1u);
  EXPECT_EQ(error_line("id,x1\nA,1\n", 1, 1), 1u);
  EXPECT_EQ(error_line("id,x1,y1\nA,1,1\nB,2\n", 1, 1), 3u);
  EXPECT_EQ(error_line("id,x1,y1\nA,1,1\nB,two,1\n", 1, 1), 3u);
  EXPECT_EQ(error_line("id,x1,y1\nA,1,\n", 1, 1), 2u);
  EXPECT_EQ(error_line("id,x1,y1\nA,1e999,1\n", 1, 1), 2u);
}

TEST(ReadDatasetCsv, ValidationStillApplies) {
  EXPECT_THROW(parse("id,x1,y1\nA,1,1\nB,2,2\n", 1, 1), ValidationError);
  EXPECT_THROW(parse("id,x1,y1\n", 1, 1), ValidationError);
  EXPECT_THROW(parse("id,x1,y1\nA,0,1\n", 1, 1), ValidationError);
}

TEST(WriteDatasetCsv, RoundTripIsExact) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Dataset d = generate(2, 3, 150, 0.2, seed);
    std::ostringstream first;
    write_dataset_csv(first, d);
    const Dataset back = parse(first.str(), 2, 3);
    EXPECT_EQ(back, d);
    std::ostringstream second;
    write_dataset_csv(second, back);
    EXPECT_EQ(first.str(), second.str());
  }
}

TEST(WriteResultsCsv, Format) {
  const Dataset d = testing::four_dmu_peer();
  EfficiencyResult r;
  r.dmu = "B";
  r.theta = 0.5;
  r.iterations = 2;
  r.max_lp_columns = 4;
  r.lambdas[0] = 1.0;
  std::vector<EfficiencyResult> results{r};
  std::ostringstream out, refs;
  write_results_csv(out, results);
  write_references_csv(refs, d, results);
  EXPECT_EQ(out.str(), "id,theta,iterations,max_lp_columns,status\nB,0.5,2,4,optimal\n");
  EXPECT_EQ(refs.str(), "id,ref_id,lambda\nB,A,1\n");
}

TEST(Metadata, RoundTrip) {
  const Metadata meta{{"m", "2"}, {"seed", "7"}, {"density", "0.25"}};
  std::ostringstream out;
  write_metadata(out, meta);
  std::istringstream in(out.str());
  EXPECT_EQ(read_metadata(in), meta);
  std::istringstream bad("m=2\nnonsense\n");
  EXPECT_THROW(read_metadata(bad), CsvError);
}

}  // namespace
}  // namespace dea
