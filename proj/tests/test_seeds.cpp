#include <cmath>
#include <fstream>

#include "doctest.h"
#include "opsum/corpus.hpp"
#include "opsum/errors.hpp"
#include "opsum/seeds.hpp"
#include "support/fixtures.hpp"

using namespace opsum;

namespace {

// three labeled segments: the "a" aspect owns [x x y] and [x], the rest is [y z]
struct ClarityFixture {
    std::vector<Segment> segments;
    std::vector<std::pair<const Segment*, std::set<std::string>>> labeled;
    Corpus corpus;
    Vocabulary vocabulary;

    ClarityFixture(std::size_t repeat = 1) {
        auto make = [](const char* id, std::vector<std::string> tokens) {
            Segment s;
            s.segment_id = id;
            s.review_id = "r";
            for (std::size_t k = 0; k < tokens.size(); ++k) s.text += tokens[k] + " ";
            s.tokens = std::move(tokens);
            return s;
        };
        std::vector<std::string> xy, x, yz;
        for (std::size_t k = 0; k < repeat; ++k) {
            xy.insert(xy.end(), {"x", "x", "y"});
            x.push_back("x");
            yz.insert(yz.end(), {"y", "z"});
        }
        segments = {make("g1", xy), make("g2", x), make("g3", yz)};
        labeled = {{&segments[0], {"a"}}, {&segments[1], {"a"}}, {&segments[2], {"other"}}};

        corpus.domain_id = "d";
        Review r;
        r.review_id = "r";
        r.product_id = "p";
        r.rating = 3;
        r.segments = segments;
        corpus.reviews.push_back(r);
        corpus.rebuild_index();
        vocabulary = build_vocabulary(corpus, 1);
    }
};

}  // namespace

TEST_CASE("clarity scores match the hand-computed tf-idf oracle") {
    ClarityFixture fx;
    ClarityScores scores = clarity_scores(fx.labeled, "a", fx.vocabulary);

    // frozen values from the independent hand-evaluated oracle:
    // t_a(x)=0.75, t(x)=0.38912972387308203 -> 0.7099795575672803
    // t_a(y)=0.25, t(y)=0.259419815915388  -> -0.013340147477573196
    CHECK(scores.score("x") == doctest::Approx(0.7099795575672803).epsilon(1e-12));
    CHECK(scores.score("y") == doctest::Approx(-0.013340147477573196).epsilon(1e-9));
    CHECK(scores.score("z") == 0.0);            // absent from aspect segments
    CHECK(!scores.occurring().contains("z"));   // ...by the stored-terms convention

    // aspect-occurring terms rank first: x above y above z
    auto ranked = scores.ranked();
    REQUIRE(ranked.size() == 2);
    CHECK(ranked[0] == "x");
    CHECK(ranked[1] == "y");
}

TEST_CASE("clarity score conventions") {
    ClarityFixture fx;
    SUBCASE("word with t_a equal to t scores zero") {
        // single aspect covering everything makes t_a == t for every word
        std::vector<std::pair<const Segment*, std::set<std::string>>> all = {
            {&fx.segments[0], {"a"}}, {&fx.segments[1], {"a"}}, {&fx.segments[2], {"a"}}};
        ClarityScores scores = clarity_scores(all, "a", fx.vocabulary);
        for (const char* w : {"x", "y", "z"})
            CHECK(scores.score(w) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("missing aspect is an error") {
        CHECK_THROWS_AS(clarity_scores(fx.labeled, "nope", fx.vocabulary), ValidationError);
    }
}

TEST_CASE("clarity scores are invariant under uniform count scaling") {
    ClarityFixture base(1), scaled(10);
    ClarityScores a = clarity_scores(base.labeled, "a", base.vocabulary);
    ClarityScores b = clarity_scores(scaled.labeled, "a", scaled.vocabulary);
    // idf shifts (df stays 1 per segment while tf scales) cancel in the
    // l1 normalization only when df is unchanged; repeating tokens inside
    // the same segments keeps df fixed, so scores must match bitwise-close
    CHECK(a.score("x") == doctest::Approx(b.score("x")).epsilon(1e-12));
    CHECK(a.score("y") == doctest::Approx(b.score("y")).epsilon(1e-12));
}

TEST_CASE("extract_seeds keeps top-l, renormalizes, and breaks ties lexicographically") {
    EmbeddingTable table(2);
    table.insert("a", Vec{1, 0});
    table.insert("b", Vec{0, 1});
    table.insert("c", Vec{1, 1});

    // aspect doc [a a b c] vs other doc [d]: clarity scores come out in the
    // ratio a : b : c = 2 : 1 : 1 with b and c exactly tied
    Corpus corpus;
    corpus.domain_id = "d";
    Review r;
    r.review_id = "r";
    r.product_id = "p";
    r.rating = 3;
    Segment s1, s2;
    s1.segment_id = "t1";
    s1.tokens = {"a", "a", "b", "c"};
    s2.segment_id = "t2";
    s2.tokens = {"d"};
    r.segments = {s1, s2};
    corpus.reviews.push_back(r);
    corpus.rebuild_index();
    Vocabulary vocab = build_vocabulary(corpus, 1);
    std::vector<std::pair<const Segment*, std::set<std::string>>> labeled = {
        {&corpus.reviews[0].segments[0], {"asp"}}, {&corpus.reviews[0].segments[1], {"oth"}}};

    std::map<std::string, ClarityScores> per_aspect;
    per_aspect["asp"] = clarity_scores(labeled, "asp", vocab);

    SeedSet seeds = extract_seeds(per_aspect, {"asp"}, 2, table);
    const auto& entries = seeds.seeds.at("asp");
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].first == "a");
    CHECK(entries[1].first == "b");  // b beats c lexicographically on equal scores
    CHECK(entries[0].second == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(entries[1].second == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    SUBCASE("asking for more seeds than eligible words fails naming the aspect") {
        CHECK_THROWS_WITH_AS(extract_seeds(per_aspect, {"asp"}, 10, table),
                             doctest::Contains("asp"), ValidationError);
    }
}

TEST_CASE("seed files round-trip and validate") {
    EmbeddingTable table(2);
    for (const char* w : {"picture", "color", "sound", "bass"})
        table.insert(w, Vec{1, 0});

    SeedSet seeds;
    seeds.aspect_names = {"image", "audio"};
    seeds.seeds["image"] = {{"picture", 0.625}, {"color", 0.375}};
    seeds.seeds["audio"] = {{"sound", 0.75}, {"bass", 0.25}};
    seeds.validate(table);

    auto dir = fixtures::scratch_dir("seedio");
    save_seeds(seeds, dir + "/seeds.tsv");
    SeedSet again = load_seeds(dir + "/seeds.tsv", table);
    CHECK(again.aspect_names == seeds.aspect_names);
    CHECK(again.seeds == seeds.seeds);

    SUBCASE("weights off the simplex are rejected") {
        std::ofstream out(dir + "/bad.tsv");
        out << "image\tpicture:0.5\tcolor:0.3\n";
        out.close();
        CHECK_THROWS_AS(load_seeds(dir + "/bad.tsv", table), ValidationError);
    }
    SUBCASE("unknown words are rejected") {
        std::ofstream out(dir + "/bad.tsv");
        out << "image\tpicture:0.5\tunknownword:0.5\n";
        out.close();
        CHECK_THROWS_AS(load_seeds(dir + "/bad.tsv", table), ValidationError);
    }
    SUBCASE("manually authored uniform weights are accepted") {
        std::ofstream out(dir + "/uniform.tsv");
        out << "image\tpicture:0.5\tcolor:0.5\naudio\tsound:0.5\tbass:0.5\n";
        out.close();
        SeedSet uniform = load_seeds(dir + "/uniform.tsv", table);
        CHECK(uniform.seeds.at("image")[0].second == 0.5);
    }
}

TEST_CASE("fixture-domain clarity ranking starts with the expected image terms") {
    // mirrors the published top-terms table layout for an image aspect:
    // picture > color > quality > black > bright, planted by frequency
    auto make_seg = [](const char* id, std::vector<std::string> tokens) {
        Segment s;
        s.segment_id = id;
        s.review_id = "r";
        s.tokens = std::move(tokens);
        return s;
    };
    Corpus corpus;
    corpus.domain_id = "tv";
    Review r;
    r.review_id = "r";
    r.product_id = "p";
    r.rating = 4;
    r.segments = {
        make_seg("i1", {"picture", "picture", "picture", "picture", "picture", "color", "color",
                        "color", "color", "quality", "quality", "quality", "black", "black",
                        "bright"}),
        make_seg("i2", {"picture", "color", "quality", "black", "bright", "bright"}),
        make_seg("o1", {"sound", "speaker", "bass", "quality", "bright"}),
        make_seg("o2", {"price", "money", "worth", "black"}),
    };
    corpus.reviews.push_back(r);
    corpus.rebuild_index();
    Vocabulary vocab = build_vocabulary(corpus, 1);
    std::vector<std::pair<const Segment*, std::set<std::string>>> labeled = {
        {&corpus.reviews[0].segments[0], {"image"}},
        {&corpus.reviews[0].segments[1], {"image"}},
        {&corpus.reviews[0].segments[2], {"sound"}},
        {&corpus.reviews[0].segments[3], {"price"}},
    };
    ClarityScores scores = clarity_scores(labeled, "image", vocab);
    auto ranked = scores.ranked();
    REQUIRE(ranked.size() >= 5);
    CHECK(ranked[0] == "picture");
    CHECK(ranked[1] == "color");
    CHECK(ranked[2] == "quality");
    CHECK(ranked[3] == "black");
    CHECK(ranked[4] == "bright");
}
