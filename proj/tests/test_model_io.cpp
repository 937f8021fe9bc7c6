#include <gtest/gtest.h>

#include <random>

#include "nwn/model_io.hpp"
#include "test_support.hpp"

using namespace nwn;
using testing_support::TempDir;

namespace {

constexpr std::size_t kDim = 12;

SparseVector random_vector(std::mt19937_64& rng) {
    std::bernoulli_distribution present(0.35);
    std::uniform_real_distribution<double> val(0.001, 2.0);
    SparseVector v;
    for (std::uint32_t f = 0; f < kDim; ++f)
        if (present(rng)) v.entries.push_back({f, val(rng)});
    return v;
}

Dataset random_dataset(std::mt19937_64& rng, std::size_t n) {
    Dataset d;
    d.n_features = kDim;
    for (std::size_t i = 0; i < n; ++i) {
        d.x.push_back(random_vector(rng));
        d.y.push_back(static_cast<int>(i % 2));
    }
    return d;
}

ModelBundle bundle_for(TrainedModel model) {
    std::vector<TokenList> docs(3);
    for (std::size_t t = 0; t < kDim; ++t) docs[t % 3].push_back("w" + std::to_string(t));
    ModelBundle b;
    b.labels = {"neg", "pos"};
    b.features = FeatureSpace::fit(docs, kDim);
    b.model = std::move(model);
    return b;
}

}  // namespace

namespace nwn {
void PrintTo(ModelKind k, std::ostream* os) { *os << to_string(k); }
}  // namespace nwn

class RoundTrip : public ::testing::TestWithParam<ModelKind> {};

TEST_P(RoundTrip, HundredRandomVectorsPredictIdentically) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(GetParam()) + 1);
    ClassifierParams params;
    params.forest.n_trees = 5;
    const auto original = bundle_for(train_model(GetParam(), random_dataset(rng, 40), params));

    TempDir dir;
    const auto path = dir.path() / "model.json";
    save_model(original, path);
    const auto loaded = load_model(path);

    EXPECT_EQ(loaded.model, original.model);
    EXPECT_EQ(loaded.features, original.features);
    EXPECT_EQ(loaded.labels, original.labels);
    EXPECT_EQ(loaded.preprocess, original.preprocess);
    EXPECT_EQ(loaded.representation, original.representation);
    for (int i = 0; i < 100; ++i) {
        const auto x = random_vector(rng);
        const auto a = predict(original.model, x);
        const auto b = predict(loaded.model, x);
        ASSERT_EQ(a.label, b.label);
        ASSERT_EQ(a.decision, b.decision);
    }
}

INSTANTIATE_TEST_SUITE_P(AllKinds, RoundTrip, ::testing::Values(ModelKind::lsvm, ModelKind::mnb, ModelKind::merf),
                         [](const auto& info) { return std::string(to_string(info.param)); });

TEST(ModelIo, OptionsAndCustomStopwordsSurvive) {
    auto b = bundle_for(LinearModel{std::vector<double>(kDim, 0.125), -1.0 / 3.0});
    b.representation = Representation::binary;
    b.preprocess = {.remove_stopwords = false, .keep_single_chars = true, .apply_nwn = false};
    b.stopwords = std::vector<std::string>{"foo", "bar"};
    b.l2_normalize = true;
    const auto back = bundle_from_json(json::parse(bundle_to_json(b).dump()));
    EXPECT_EQ(back.representation, Representation::binary);
    EXPECT_EQ(back.preprocess, b.preprocess);
    EXPECT_EQ(back.stopwords, b.stopwords);
    EXPECT_TRUE(back.l2_normalize);
    EXPECT_EQ(std::get<LinearModel>(back.model).b, -1.0 / 3.0);
}

TEST(ModelIo, DocumentHasVersionAndKind) {
    const auto j = bundle_to_json(bundle_for(LinearModel{std::vector<double>(kDim, 0.0), 0.0}));
    EXPECT_EQ(j.at("format_version"), kModelFormatVersion);
    EXPECT_EQ(j.at("model_kind"), "lsvm");
    for (const char* key : {"representation", "preprocess_options", "vocabulary", "idf", "model_payload"})
        EXPECT_TRUE(j.contains(key)) << key;
}

TEST(ModelIo, VersionMismatch) {
    auto j = bundle_to_json(bundle_for(LinearModel{std::vector<double>(kDim, 0.0), 0.0}));
    j["format_version"] = 99;
    TempDir dir;
    const auto path = dir.write("v99.json", j.dump());
    EXPECT_THROW(load_model(path), VersionError);
}

TEST(ModelIo, EmptyAndTruncatedFiles) {
    TempDir dir;
    EXPECT_THROW(load_model(dir.write("empty.json", "")), ParseError);
    const auto text = bundle_to_json(bundle_for(LinearModel{std::vector<double>(kDim, 0.5), 0.0})).dump();
    EXPECT_THROW(load_model(dir.write("cut.json", text.substr(0, text.size() / 2))), ParseError);
    EXPECT_THROW(load_model(dir.write("obj.json", "{}")), ParseError);
    EXPECT_THROW(load_model(dir.path() / "missing.json"), IoError);
}

TEST(ModelIo, FeatureSpaceJsonRoundTrip) {
    const std::vector<TokenList> docs = {{"a", "b"}, {"b", "c", "c"}, {"c"}};
    const auto fs = FeatureSpace::fit(docs, 3);
    EXPECT_EQ(feature_space_from_json(feature_space_to_json(fs)), fs);
}

TEST(ModelIo, MismatchedLengthsRejected) {
    const auto good = bundle_to_json(bundle_for(LinearModel{std::vector<double>(kDim, 0.0), 0.0}));
    auto j = good;
    j["idf"]["df"].push_back(1);
    EXPECT_THROW(bundle_from_json(j), ParseError);
    j = good;
    j["model_payload"]["w"].push_back(1.0);
    EXPECT_THROW(bundle_from_json(j), ParseError);
    j = good;
    j["labels"].push_back("extra");
    EXPECT_THROW(bundle_from_json(j), ParseError);
}
