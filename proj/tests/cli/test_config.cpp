#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "bfd/error.hpp"
#include "config.hpp"

using namespace bfd;
using namespace bfd::cli;
using nlohmann::json;

TEST(Config, EmptyDocumentGivesDefaults) {
  const auto c = config_from_json(json::object());
  EXPECT_EQ(c.seed, 0u);
  EXPECT_EQ(c.ternary_k, 4u);
  EXPECT_EQ(c.dataset.per_class_train, 450u);
  EXPECT_EQ(c.tuner.algorithm, tune::Algorithm::kIabc);
  EXPECT_EQ(c.benchmark.colony_size, 200u);
}

TEST(Config, NestedValuesParsed) {
  const auto c = config_from_json(json::parse(R"({
    "seed": 9,
    "dataset": {"synthetic": {"classes": 3, "per_class": 12, "length": 256},
                "split": {"per_class_train": 8, "per_class_test": 4}},
    "shapelet": {"max_len": 10, "r": 20},
    "ternary": {"k": 2},
    "gbdt": {"n_estimators": 50, "max_depth": 4},
    "tuner": {"algorithm": "abc", "space": "all"},
    "benchmark": {"function": "f2", "repetitions": 3}
  })"));
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.gbdt.seed, 9u);
  EXPECT_EQ(c.dataset.synthetic.classes, 3);
  EXPECT_EQ(c.dataset.per_class_test, 4u);
  EXPECT_EQ(c.shapelet.r, 20u);
  EXPECT_EQ(c.ternary_k, 2u);
  EXPECT_EQ(c.gbdt.n_estimators, 50);
  EXPECT_EQ(c.tuner.algorithm, tune::Algorithm::kAbc);
  EXPECT_TRUE(c.tuner.all_parameters);
  EXPECT_EQ(c.benchmark.function, "f2");
}

TEST(Config, UnknownKeysRejected) {
  EXPECT_THROW(config_from_json(json{{"sed", 1}}), ArgumentError);
  EXPECT_THROW(config_from_json(json{{"shapelet", {{"maxlen", 3}}}}), ArgumentError);
  EXPECT_THROW(config_from_json(json{{"gbdt", {{"trees", 3}}}}), ArgumentError);
  EXPECT_THROW(config_from_json(json{{"gbdt", {{"seed", 3}}}}), ArgumentError);
}

TEST(Config, WrongTypesRejected) {
  EXPECT_THROW(config_from_json(json{{"seed", "seven"}}), ArgumentError);
  EXPECT_THROW(config_from_json(json{{"tuner", {{"algorithm", "pso"}}}}), ArgumentError);
  EXPECT_THROW(config_from_json(json{{"tuner", {{"space", "everything"}}}}), ArgumentError);
}

TEST(Config, ValidationCatchesBadRanges) {
  auto bad = [](json j) { return config_from_json(j); };
  EXPECT_THROW(bad(json{{"tuner", {{"max_iterations", 0}}}}).validate(), ArgumentError);
  EXPECT_THROW(bad(json{{"tuner", {{"folds", 1}}}}).validate(), ArgumentError);
  EXPECT_THROW(bad(json{{"ternary", {{"k", 11}}}}).validate(), ArgumentError);
  EXPECT_THROW(bad(json{{"benchmark", {{"function", "f9"}}}}).validate(), ArgumentError);
  EXPECT_THROW(bad(json{{"gbdt", {{"learning_rate", 2.0}}}}).validate(), ArgumentError);
  EXPECT_NO_THROW(PipelineConfig{}.validate());
}

TEST(Config, JsonRoundTrip) {
  PipelineConfig c;
  c.seed = 4;
  c.gbdt.seed = 4;
  c.shapelet.max_len = 11;
  c.tuner.all_parameters = true;
  c.benchmark.algorithm = tune::Algorithm::kAbc;
  const auto back = config_from_json(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
  EXPECT_EQ(back.gbdt, c.gbdt);
}

TEST(Config, LoadFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "bfd_config_test.json";
  std::ofstream(path) << R"({"seed": 5, "out_dir": "elsewhere"})";
  const auto c = load_config(path);
  EXPECT_EQ(c.seed, 5u);
  EXPECT_EQ(c.out_dir, "elsewhere");
  std::ofstream(path) << "{not json";
  EXPECT_THROW(load_config(path), std::exception);
}

TEST(Config, RunConfigCarriesSeed) {
  TunerConfig t;
  t.colony_size = 12;
  const auto rc = run_config(t, 77);
  EXPECT_EQ(rc.seed, 77u);
  EXPECT_EQ(rc.colony_size, 12u);
  EXPECT_EQ(algorithm_name(parse_algorithm("iabc")), "iabc");
}

namespace {

// Every object key in `doc` must be a schema property and vice versa.
void expect_same_keys(const json& schema, const json& doc, const std::string& where) {
  const auto& props = schema.at("properties");
  EXPECT_FALSE(schema.at("additionalProperties").get<bool>()) << where;
  for (const auto& [key, value] : doc.items()) {
    ASSERT_TRUE(props.contains(key)) << where << "." << key << " missing from schema";
    if (value.is_object()) expect_same_keys(props.at(key), value, where + "." + key);
  }
  for (const auto& [key, value] : props.items()) {
    EXPECT_TRUE(doc.contains(key)) << where << "." << key << " not produced by the loader";
  }
}

}  // namespace

TEST(Config, PublishedSchemaMatchesLoaderKeys) {
  std::ifstream in(BFD_CONFIG_SCHEMA);
  ASSERT_TRUE(in) << BFD_CONFIG_SCHEMA;
  const auto schema = json::parse(in);
  expect_same_keys(schema, to_json(PipelineConfig{}), "config");
}
