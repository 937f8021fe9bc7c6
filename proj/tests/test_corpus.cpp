#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "nwn/corpus.hpp"
#include "test_support.hpp"

using namespace nwn;
using testing_support::TempDir;

TEST(LoadTsv, TwoDocumentsAndSortedAlphabet) {
    TempDir dir;
    const auto c = load_tsv(dir.write("a.tsv", "pos\tgreat movie\nneg\tawful plot\n"));
    ASSERT_EQ(c.size(), 2u);
    EXPECT_EQ(c[0], (Document{"great movie", "pos"}));
    EXPECT_EQ(c[1], (Document{"awful plot", "neg"}));
    EXPECT_EQ(c.labels(), (std::vector<std::string>{"neg", "pos"}));
}

TEST(LoadTsv, EmptyFile) {
    TempDir dir;
    const auto c = load_tsv(dir.write("empty.tsv", ""));
    EXPECT_TRUE(c.empty());
    EXPECT_TRUE(c.labels().empty());
}

TEST(LoadTsv, MissingTabNamesLine) {
    TempDir dir;
    try {
        load_tsv(dir.write("bad.tsv", "pos great"));
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 1u);
    }
    try {
        load_tsv(dir.write("bad2.tsv", "pos\tok\n\nneg bad\n"));
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
}

TEST(LoadTsv, EmptyLabelRejected) {
    std::istringstream in("\tno label\n");
    EXPECT_THROW(parse_tsv(in), ParseError);
}

TEST(LoadTsv, ExtraTabsBecomeSpacesAndCrlfStripped) {
    std::istringstream in("pos\ta\tb\r\n");
    const auto c = parse_tsv(in);
    EXPECT_EQ(c[0].text, "a b");
}

TEST(LoadTsv, MissingFileIsIoError) { EXPECT_THROW(load_tsv("/nonexistent/x.tsv"), IoError); }

TEST(LoadTsv, InvalidUtf8Replaced) {
    std::istringstream in("pos\tcaf\xE9 ok\n");
    EXPECT_EQ(parse_tsv(in)[0].text, "caf\xEF\xBF\xBD ok");
}

TEST(WriteTsv, RejectsTabsAndNewlines) {
    std::ostringstream out;
    EXPECT_THROW(write_tsv(Corpus(std::vector<Document>{{"a\tb", "pos"}}), out), DataError);
    EXPECT_THROW(write_tsv(Corpus(std::vector<Document>{{"a\nb", "pos"}}), out), DataError);
}

TEST(WriteTsv, RoundTripProperty) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const auto c = testing_support::random_corpus(rng, 2, 0, 10);
        std::stringstream buf;
        write_tsv(c, buf);
        // Empty texts survive: a line "label\t" still holds the separator.
        EXPECT_EQ(parse_tsv(buf), c);
    }
}

TEST(LoadCsv, QuotedFieldWithComma) {
    std::istringstream in("v1,v2\nham,\"ok, see you\"\n");
    const auto c = parse_csv(in, "v1", "v2");
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c[0], (Document{"ok, see you", "ham"}));
}

TEST(LoadCsv, DoubledQuotesAndEmbeddedNewline) {
    std::istringstream in("label,text,extra\r\nspam,\"say \"\"hi\"\"\nnow\",,\r\n");
    const auto c = parse_csv(in, "label", "text");
    EXPECT_EQ(c[0].text, "say \"hi\"\nnow");
}

TEST(LoadCsv, MissingColumnIsConfigError) {
    std::istringstream in("v1,v2\nham,hi\n");
    EXPECT_THROW(parse_csv(in, "v9", "v2"), ConfigError);
}

TEST(LoadCsv, MalformedQuotingNamesRow) {
    std::istringstream in("v1,v2\nham,ok\nspam,\"open\"x\n");
    try {
        parse_csv(in, "v1", "v2");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
    std::istringstream unterminated("v1,v2\nham,\"never closed\n");
    EXPECT_THROW(parse_csv(unterminated, "v1", "v2"), ParseError);
}

TEST(LoadPrefix, Examples) {
    std::istringstream in("__label__2 great product\n__label__1 \n");
    const auto c = parse_prefix_labeled(in);
    ASSERT_EQ(c.size(), 2u);
    EXPECT_EQ(c[0], (Document{"great product", "2"}));
    EXPECT_EQ(c[1], (Document{"", "1"}));
}

TEST(LoadPrefix, MissingPrefixNamesLine) {
    std::istringstream in("great product\n");
    try {
        parse_prefix_labeled(in);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 1u);
    }
}

TEST(LoadPrefix, PerLabelLimitKeepsFirstLines) {
    std::istringstream in("__label__1 a\n__label__2 b\n__label__1 c\n__label__1 d\n__label__2 e\n__label__2 f\n");
    const auto c = parse_prefix_labeled(in, 2);
    ASSERT_EQ(c.size(), 4u);
    EXPECT_EQ(c[0].text, "a");
    EXPECT_EQ(c[1].text, "b");
    EXPECT_EQ(c[2].text, "c");
    EXPECT_EQ(c[3].text, "e");
}

TEST(LoadDirTree, OrdersByLabelThenFilename) {
    TempDir dir;
    dir.write("pos/b.txt", "pos b");
    dir.write("pos/a.txt", "pos a");
    dir.write("neg/c.txt", "neg c");
    const auto c = load_dir_tree(dir.path(), {{"pos", "pos"}, {"neg", "neg"}});
    ASSERT_EQ(c.size(), 3u);
    EXPECT_EQ(c[0].text, "neg c");
    EXPECT_EQ(c[1].text, "pos a");
    EXPECT_EQ(c[2].text, "pos b");
}

TEST(LoadDirTree, EmptySubdirectory) {
    TempDir dir;
    std::filesystem::create_directories(dir.path() / "pos");
    dir.write("neg/c.txt", "neg c");
    const auto c = load_dir_tree(dir.path(), {{"pos", "pos"}, {"neg", "neg"}});
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c[0].label, "neg");
}

TEST(LoadDirTree, MissingSubdirectoryNamesPath) {
    TempDir dir;
    dir.write("neg/c.txt", "x");
    try {
        load_dir_tree(dir.path(), {{"pos", "pos"}, {"neg", "neg"}});
        FAIL() << "expected IoError";
    } catch (const IoError& e) {
        EXPECT_NE(std::string(e.what()).find("pos"), std::string::npos);
    }
}

namespace {

Corpus balanced(std::size_t per_class) {
    std::vector<Document> docs;
    for (std::size_t i = 0; i < per_class; ++i) {
        docs.push_back({"p" + std::to_string(i), "pos"});
        docs.push_back({"n" + std::to_string(i), "neg"});
    }
    return Corpus(std::move(docs));
}

std::size_t count_label(const Corpus& c, const std::string& label) {
    std::size_t n = 0;
    for (const auto& d : c.docs()) n += d.label == label ? 1 : 0;
    return n;
}

}  // namespace

TEST(StratifiedSplit, TenDocsEightyTwenty) {
    const auto [train, test] = stratified_split(balanced(5), {0.8, 1});
    EXPECT_EQ(train.size(), 8u);
    EXPECT_EQ(test.size(), 2u);
    EXPECT_EQ(count_label(train, "pos"), 4u);
    EXPECT_EQ(count_label(test, "neg"), 1u);
    EXPECT_EQ(train.labels(), test.labels());
}

TEST(StratifiedSplit, FiftyThousandGivesFortyAndTenThousand) {
    const auto idx = stratified_split_indices(balanced(25000), {0.8, 42});
    EXPECT_EQ(idx.train.size(), 40000u);
    EXPECT_EQ(idx.test.size(), 10000u);
}

TEST(StratifiedSplit, DeterministicForEqualSeeds) {
    const auto c = balanced(50);
    EXPECT_EQ(stratified_split_indices(c, {0.8, 7}).test, stratified_split_indices(c, {0.8, 7}).test);
}

TEST(StratifiedSplit, Errors) {
    EXPECT_THROW(stratified_split_indices(Corpus({{"a", "pos"}, {"b", "neg"}, {"c", "neg"}}), {0.8, 1}), SplitError);
    EXPECT_THROW(stratified_split_indices(balanced(5), {1.0, 1}), SplitError);
    EXPECT_THROW(stratified_split_indices(Corpus(), {0.8, 1}), SplitError);
}

TEST(StratifiedKFold, HundredDocsTenFolds) {
    const auto c = balanced(50);
    const auto plan = stratified_kfold(c, 10, 42);
    for (std::size_t f = 0; f < 10; ++f) {
        const auto test = plan.test_indices(f);
        ASSERT_EQ(test.size(), 10u);
        std::size_t pos = 0;
        for (auto i : test) pos += c[i].label == "pos" ? 1 : 0;
        EXPECT_EQ(pos, 5u);
        EXPECT_EQ(plan.train_indices(f).size(), 90u);
    }
}

TEST(StratifiedKFold, TwoFoldsOnFourDocs) {
    const auto c = balanced(2);
    const auto plan = stratified_kfold(c, 2, 1);
    for (std::size_t f = 0; f < 2; ++f) {
        const auto test = plan.test_indices(f);
        ASSERT_EQ(test.size(), 2u);
        EXPECT_NE(c[test[0]].label, c[test[1]].label);
    }
}

TEST(StratifiedKFold, Errors) {
    EXPECT_THROW(stratified_kfold(balanced(5), 1, 1), SplitError);
    EXPECT_THROW(stratified_kfold(balanced(5), 6, 1), SplitError);
}

TEST(Partitioning, PropertiesOverRandomCorpora) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t k = 2 + trial % 5;
        const auto c = testing_support::random_corpus(rng, 2 + trial % 2, k, 40);
        const auto seed = static_cast<std::uint64_t>(trial);

        const auto split = stratified_split_indices(c, {0.8, seed});
        std::vector<int> seen(c.size(), 0);
        for (auto i : split.train) ++seen[i];
        for (auto i : split.test) ++seen[i];
        for (int s : seen) ASSERT_EQ(s, 1);

        const auto plan = stratified_kfold(c, k, seed);
        ASSERT_EQ(plan, stratified_kfold(c, k, seed));
        std::vector<std::vector<std::size_t>> per(k, std::vector<std::size_t>(c.labels().size(), 0));
        for (std::size_t i = 0; i < c.size(); ++i) ++per[plan.assignments[i]][c.class_of(i)];
        for (std::size_t cls = 0; cls < c.labels().size(); ++cls) {
            std::size_t lo = SIZE_MAX, hi = 0;
            for (std::size_t f = 0; f < k; ++f) {
                lo = std::min(lo, per[f][cls]);
                hi = std::max(hi, per[f][cls]);
            }
            ASSERT_LE(hi - lo, 1u);
        }
        for (std::size_t f = 0; f < k; ++f) ASSERT_FALSE(plan.test_indices(f).empty());
    }
}
