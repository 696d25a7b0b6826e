#include <gtest/gtest.h>

#include <random>

#include "tic/instance_gen.hpp"
#include "tic/io.hpp"

using namespace tic;
using io::ParseError;

namespace {

ParseError::Code code_of(const std::string& text) {
  try {
    io::parse_instance(text);
  } catch (const ParseError& e) {
    return e.code();
  }
  ADD_FAILURE() << "accepted: " << text;
  return ParseError::Code::InvalidJson;
}

}  // namespace

TEST(ParseInstance, Accepts) {
  Instance inst = io::parse_instance(
      R"({"covering_length": "1", "agents": [{"s": "3/2"}, {"s": "0.5", "length": "1/2"}, {"s": "-2"}]})");
  EXPECT_EQ(inst.size(), 3u);
  EXPECT_EQ(inst.agent_by_id(0).s, Coord(3, 2));
  EXPECT_EQ(inst.agent_by_id(1).length, Coord(1, 2));
  EXPECT_EQ(inst.agents().front().id, 2u);
}

TEST(ParseInstance, Diagnostics) {
  using C = ParseError::Code;
  EXPECT_EQ(code_of("{"), C::InvalidJson);
  EXPECT_EQ(code_of("[]"), C::InvalidJson);
  EXPECT_EQ(code_of(R"({"agents": []})"), C::MissingField);
  EXPECT_EQ(code_of(R"({"covering_length": "1"})"), C::MissingField);
  EXPECT_EQ(code_of(R"({"covering_length": "1", "agents": [{}]})"), C::MissingField);
  EXPECT_EQ(code_of(R"({"covering_length": 1, "agents": [{"s": "0"}]})"), C::NotAString);
  EXPECT_EQ(code_of(R"({"covering_length": "1", "agents": [{"s": "x"}]})"), C::MalformedNumber);
  EXPECT_EQ(code_of(R"({"covering_length": "1", "agents": [{"s": "1/0"}]})"), C::ZeroDenominator);
  EXPECT_EQ(code_of(R"({"covering_length": "1", "agents": [{"s": "123456789012345678901234"}]})"),
            C::NumberOutOfRange);
  EXPECT_EQ(code_of(R"({"covering_length": "1", "agents": [{"s": "0", "length": "0"}]})"), C::NonPositiveLength);
  EXPECT_EQ(code_of(R"({"covering_length": "-1", "agents": [{"s": "0"}]})"), C::NonPositiveCoveringLength);
  EXPECT_EQ(code_of(R"({"covering_length": "1", "agents": []})"), C::EmptyAgentList);
}

TEST(Serialize, CanonicalText) {
  Instance inst = Instance::from_intervals({{Coord(3, 2), 1}, {0, Coord(1, 2)}}, 1);
  EXPECT_EQ(io::serialize_instance(inst),
            "{\n  \"covering_length\": \"1\",\n  \"agents\": [\n    {\n      \"s\": \"3/2\",\n      \"length\": \"1\"\n"
            "    },\n    {\n      \"s\": \"0\",\n      \"length\": \"1/2\"\n    }\n  ]\n}\n");
}

TEST(Serialize, RoundTripProperty) {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Interval> ivs;
    std::size_t n = 1 + rng() % 8;
    for (std::size_t i = 0; i < n; ++i) {
      ivs.push_back({Coord(static_cast<std::int64_t>(rng() % 2001) - 1000, static_cast<std::int64_t>(rng() % 97) + 1),
                     Coord(static_cast<std::int64_t>(rng() % 50) + 1, static_cast<std::int64_t>(rng() % 13) + 1)});
    }
    Instance inst = Instance::from_intervals(ivs, Coord(static_cast<std::int64_t>(rng() % 9) + 1, 3));
    std::string text = io::serialize_instance(inst);
    Instance back = io::parse_instance(text);
    ASSERT_EQ(back, inst);
    ASSERT_EQ(io::serialize_instance(back), text);
    ASSERT_EQ(io::instance_digest(back), io::instance_digest(inst));
  }
}

TEST(Digest, DistinguishesInstances) {
  EXPECT_NE(io::instance_digest(Instance::unit({0, 1})), io::instance_digest(Instance::unit({1, 0})));
  EXPECT_EQ(io::instance_digest(Instance::unit({0})).size(), 16u);
}

TEST(Reports, NumberAndRatioObjects) {
  EXPECT_EQ(io::number_json(Coord(5, 3)).dump(), R"({"rational":"5/3","decimal":"1.666666666667"})");
  EXPECT_EQ(io::ratio_json(Ratio::of(1, 0)).dump(), R"({"rational":"UNBOUNDED","decimal":"inf"})");
}

TEST(Csv, Quoting) {
  EXPECT_EQ(io::csv_cell(io::Json("plain")), "plain");
  EXPECT_EQ(io::csv_cell(io::Json("a,b")), "\"a,b\"");
  EXPECT_EQ(io::csv_cell(io::Json("say \"hi\"")), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(io::csv_cell(io::number_json(Coord(1, 2))), "1/2");
  EXPECT_EQ(io::csv_line({"a", "b"}), "a,b\n");
}
