// Copyright 2026 The StreamForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <random>

#include "streamforge/common/error.hpp"
#include "streamforge/instance/arff.hpp"
#include "streamforge/instance/instance.hpp"
#include "streamforge/instance/schema.hpp"

namespace sf = streamforge;

namespace {

sf::InstanceSchema numericSchema(std::size_t n) {
  std::vector<sf::AttributeSpec> attrs;
  for (std::size_t i = 0; i < n; ++i) attrs.push_back(sf::AttributeSpec::numeric("a" + std::to_string(i)));
  return sf::InstanceSchema(std::move(attrs), sf::ClassLabels{{"0", "1"}});
}

}  // namespace

TEST(Schema, RejectsInvalidDefinitions) {
  EXPECT_THROW(sf::AttributeSpec::categorical("c", {}), sf::ConfigError);
  EXPECT_THROW(sf::AttributeSpec::categorical("c", {"a", "a"}), sf::ConfigError);
  EXPECT_THROW(sf::InstanceSchema({}, sf::ClassLabels{{"0", "1"}}), sf::ConfigError);
  EXPECT_THROW(sf::InstanceSchema({sf::AttributeSpec::numeric("x")}, sf::ClassLabels{{"0"}}),
               sf::ConfigError);
  EXPECT_THROW(sf::InstanceSchema({sf::AttributeSpec::numeric("x"), sf::AttributeSpec::numeric("x")},
                                  sf::ClassLabels{{"0", "1"}}),
               sf::ConfigError);
  EXPECT_THROW(sf::InstanceSchema({sf::AttributeSpec::numeric("x")}, sf::NumericRange{1.0, 1.0}),
               sf::ConfigError);
}

TEST(Instance, WeightMustBeNonNegative) {
  EXPECT_THROW(sf::Instance::dense({1.0}, 0.0, -1.0), sf::ConfigError);
  EXPECT_NO_THROW(sf::Instance::dense({1.0}, 0.0, 0.0));
}

TEST(Instance, SparseIndicesValidated) {
  EXPECT_THROW(sf::Instance::sparse(3, {{2, 1.0}, {1, 1.0}}), sf::ConfigError);
  EXPECT_THROW(sf::Instance::sparse(3, {{1, 1.0}, {1, 2.0}}), sf::ConfigError);
  EXPECT_THROW(sf::Instance::sparse(3, {{3, 1.0}}), sf::ConfigError);
  auto s = sf::Instance::sparse(5, {{1, 2.0}, {4, 3.0}}, 1.0);
  EXPECT_EQ(s.attributeCount(), 5u);
  EXPECT_EQ(s.value(0), 0.0);
  EXPECT_EQ(s.value(4), 3.0);
}

TEST(Instance, ToSparseDropsZeros) {
  auto schema = numericSchema(3);
  auto s = sf::toSparse(sf::Instance::dense({0, 0, 3.5}, 1.0, 2.0), schema);
  ASSERT_EQ(s.sparseEntries().size(), 1u);
  EXPECT_EQ(s.sparseEntries()[0].index, 2u);
  EXPECT_EQ(s.sparseEntries()[0].value, 3.5);
  EXPECT_EQ(s.label(), 1.0);
  EXPECT_EQ(s.weight(), 2.0);
  EXPECT_TRUE(sf::toSparse(sf::Instance::dense({0, 0, 0}), schema).sparseEntries().empty());
}

TEST(Instance, DenseSparseRoundTrip) {
  auto schema = numericSchema(20);
  std::mt19937_64 rng(11);
  std::bernoulli_distribution zero(0.6);
  std::normal_distribution<double> value(0.0, 3.0);
  for (int k = 0; k < 1000; ++k) {
    std::vector<double> v(20);
    for (auto& x : v) x = zero(rng) ? 0.0 : value(rng);
    auto x = sf::Instance::dense(v, static_cast<double>(k % 2), 1.0 + k % 3);
    EXPECT_EQ(sf::toDense(sf::toSparse(x, schema)), x);
  }
}

TEST(Arff, MinimalFile) {
  auto data = sf::parseArff(
      "% comment\n@relation r\n@attribute x numeric\n@attribute class {0,1}\n@data\n1.5,0\n");
  ASSERT_EQ(data.instances.size(), 1u);
  EXPECT_EQ(data.schema.attributeCount(), 1u);
  EXPECT_EQ(data.schema.classCount(), 2u);
  EXPECT_EQ(data.instances[0].value(0), 1.5);
  EXPECT_EQ(data.instances[0].label(), 0.0);
}

TEST(Arff, MissingAndNominalValues) {
  auto data = sf::parseArff(
      "@relation r\n@attribute c {red,'dark blue'}\n@attribute x real\n@attribute y {a,b}\n"
      "@data\n'dark blue',?,b\nred,2,a\n");
  ASSERT_EQ(data.instances.size(), 2u);
  EXPECT_EQ(data.instances[0].value(0), 1.0);
  EXPECT_TRUE(sf::isMissing(data.instances[0].value(1)));
  EXPECT_EQ(data.instances[0].label(), 1.0);
}

TEST(Arff, ErrorsCarryLineNumbers) {
  try {
    sf::parseArff("@relation r\n@attribute x numeric\n@attribute c {0,1}\n@data\n1,0\n1,2\n");
    FAIL();
  } catch (const sf::ParseError& e) {
    EXPECT_EQ(e.position(), 6u);
  }
  try {
    sf::parseArff("@relation r\n@attribute x numeric\n@attribute c {0,1}\n@data\n1,0,3\n");
    FAIL();
  } catch (const sf::ParseError& e) {
    EXPECT_EQ(e.position(), 5u);
  }
  try {
    sf::parseArff("@relation r\n@attribute x strange\n@attribute c {0,1}\n@data\n");
    FAIL();
  } catch (const sf::ParseError& e) {
    EXPECT_EQ(e.position(), 2u);
  }
}

TEST(Arff, Deterministic) {
  const char* text = "@relation r\n@attribute x numeric\n@attribute y numeric\n@data\n1,2\n3,4\n5,9\n";
  auto a = sf::parseArff(text);
  auto b = sf::parseArff(text);
  EXPECT_EQ(a.schema, b.schema);
  EXPECT_EQ(a.instances, b.instances);
  EXPECT_FALSE(a.schema.isClassification());
  EXPECT_EQ(a.schema.targetRange().min, 2.0);
  EXPECT_EQ(a.schema.targetRange().max, 9.0);
}

TEST(Arff, TargetOverrideAndSparseRows) {
  sf::ArffOptions opts;
  opts.targetAttribute = "c";
  auto data = sf::parseArff(
      "@relation r\n@attribute c {p,q}\n@attribute x numeric\n@attribute y numeric\n@data\n"
      "{0 q,2 4.5}\n",
      opts);
  ASSERT_EQ(data.instances.size(), 1u);
  EXPECT_EQ(data.schema.attributeCount(), 2u);
  EXPECT_EQ(data.instances[0].label(), 1.0);
  EXPECT_EQ(data.instances[0].value(0), 0.0);
  EXPECT_EQ(data.instances[0].value(1), 4.5);
}
