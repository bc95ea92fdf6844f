#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "opsum/corpus.hpp"
#include "opsum/errors.hpp"
#include "support/fixtures.hpp"

using namespace opsum;

TEST_CASE("normalize_tokens lowercases, strips punctuation and drops stopwords") {
    StopwordSet stop{"the", "are"};
    CHECK(normalize_tokens("The colors are perfectly crisp", stop) ==
          std::vector<std::string>{"colors", "perfectly", "crisp"});
    CHECK(normalize_tokens("", stop).empty());
    CHECK(normalize_tokens("HDMI, hdmi!", {}) == std::vector<std::string>{"hdmi", "hdmi"});
}

TEST_CASE("normalize_tokens is idempotent") {
    StopwordSet stop{"the", "a", "is"};
    for (const char* text : {"The picture, is STUNNING!!", "don't like it...", "4K @ 60hz", ""}) {
        auto once = normalize_tokens(text, stop);
        std::string joined;
        for (const auto& t : once) joined += t + " ";
        CHECK(normalize_tokens(joined, stop) == once);
    }
}

TEST_CASE("load_corpus parses the fixture corpus") {
    Corpus corpus = load_corpus(fixtures::path("reviews.jsonl"), "tv");
    CHECK(corpus.reviews.size() == 4);
    CHECK(corpus.segment_count() == 12);
    CHECK(corpus.products.size() == 2);
    CHECK(corpus.products.at("p1").size() == 2);
    const Segment* s1 = corpus.find_segment("s1");
    REQUIRE(s1 != nullptr);
    CHECK(s1->tokens == std::vector<std::string>{"picture", "crisp", "sharp"});
    CHECK(s1->review_id == "r1");
    // file order preserved
    CHECK(corpus.reviews[0].review_id == "r1");
    CHECK(corpus.reviews[3].review_id == "r4");
}

TEST_CASE("load_corpus counts two reviews with three segments each") {
    auto dir = fixtures::scratch_dir("corpus_small");
    std::ofstream out(dir + "/r.jsonl");
    out << R"({"review_id":"a","product_id":"p","rating":3,"segments":[)"
        << R"({"segment_id":"a1","text":"one"},{"segment_id":"a2","text":"two"},{"segment_id":"a3","text":"three"}]})"
        << "\n"
        << R"({"review_id":"b","product_id":"p","rating":4,"segments":[)"
        << R"({"segment_id":"b1","text":"one"},{"segment_id":"b2","text":"two"},{"segment_id":"b3","text":"three"}]})"
        << "\n";
    out.close();
    Corpus c = load_corpus(dir + "/r.jsonl", "d");
    CHECK(c.reviews.size() == 2);
    CHECK(c.segment_count() == 6);
}

TEST_CASE("load_corpus rejects out-of-range ratings naming the review") {
    auto dir = fixtures::scratch_dir("corpus_badrating");
    std::ofstream out(dir + "/r.jsonl");
    out << R"({"review_id":"bad1","product_id":"p","rating":7,"segments":[{"segment_id":"x","text":"t"}]})"
        << "\n";
    out.close();
    CHECK_THROWS_WITH_AS(load_corpus(dir + "/r.jsonl", "d"),
                         doctest::Contains("bad1"), ValidationError);
}

TEST_CASE("load_corpus accepts an empty file") {
    auto dir = fixtures::scratch_dir("corpus_empty");
    std::ofstream(dir + "/r.jsonl").close();
    Corpus c = load_corpus(dir + "/r.jsonl", "d");
    CHECK(c.reviews.empty());
}

TEST_CASE("load_corpus reports malformed lines with their number") {
    auto dir = fixtures::scratch_dir("corpus_badline");
    std::ofstream out(dir + "/r.jsonl");
    out << R"({"review_id":"a","product_id":"p","rating":3,"segments":[{"segment_id":"x","text":"t"}]})"
        << "\n"
        << "this is not json\n";
    out.close();
    try {
        load_corpus(dir + "/r.jsonl", "d");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("load_corpus honors pre-tokenized segments") {
    auto dir = fixtures::scratch_dir("corpus_pretok");
    std::ofstream out(dir + "/r.jsonl");
    out << R"({"review_id":"a","product_id":"p","rating":3,"segments":[)"
        << R"({"segment_id":"x","text":"ignored text","tokens":["Nice","the","Colour"]}]})"
        << "\n";
    out.close();
    Corpus c = load_corpus(dir + "/r.jsonl", "d", StopwordSet{"the"});
    CHECK(c.find_segment("x")->tokens == std::vector<std::string>{"nice", "colour"});
}

TEST_CASE("corpus round-trips through save and load") {
    Corpus corpus = load_corpus(fixtures::path("reviews.jsonl"), "tv");
    auto dir = fixtures::scratch_dir("corpus_roundtrip");
    save_corpus(corpus, dir + "/copy.jsonl");
    Corpus again = load_corpus(dir + "/copy.jsonl", "tv");
    REQUIRE(again.reviews.size() == corpus.reviews.size());
    for (std::size_t i = 0; i < corpus.reviews.size(); ++i) {
        const Review& a = corpus.reviews[i];
        const Review& b = again.reviews[i];
        CHECK(a.review_id == b.review_id);
        CHECK(a.product_id == b.product_id);
        CHECK(a.rating == b.rating);
        REQUIRE(a.segments.size() == b.segments.size());
        for (std::size_t j = 0; j < a.segments.size(); ++j) {
            CHECK(a.segments[j].segment_id == b.segments[j].segment_id);
            CHECK(a.segments[j].text == b.segments[j].text);
            CHECK(a.segments[j].tokens == b.segments[j].tokens);
        }
    }
    CHECK(again.products == corpus.products);
}

TEST_CASE("build_vocabulary thresholds and document frequencies") {
    Corpus c;
    c.domain_id = "d";
    Review r;
    r.review_id = "r";
    r.product_id = "p";
    r.rating = 3;
    auto seg = [](const char* id, std::vector<std::string> tokens) {
        Segment s;
        s.segment_id = id;
        s.tokens = std::move(tokens);
        s.review_id = "r";
        return s;
    };
    r.segments = {seg("x1", {"a", "b"}), seg("x2", {"a", "c"}), seg("x3", {"a"})};
    c.reviews.push_back(r);
    c.rebuild_index();

    Vocabulary v1 = build_vocabulary(c, 1);
    CHECK(v1.size() == 3);
    CHECK(v1.document_frequency("a") == 3);
    CHECK(v1.document_frequency("b") == 1);
    CHECK(v1.total_segments() == 3);

    Vocabulary v2 = build_vocabulary(c, 2);
    CHECK(v2.size() == 1);
    CHECK(v2.contains("a"));

    // min_count 0 is treated as 1
    CHECK(build_vocabulary(c, 0).size() == 3);

    // ids are a bijection onto [0, V)
    std::vector<bool> seen(v1.size(), false);
    for (const std::string& t : v1.tokens()) {
        auto id = v1.id(t);
        REQUIRE(id.has_value());
        REQUIRE(*id < v1.size());
        CHECK(!seen[*id]);
        seen[*id] = true;
    }

    Corpus empty;
    empty.domain_id = "d";
    CHECK_THROWS_AS(build_vocabulary(empty, 1), ValidationError);
}

TEST_CASE("load_annotations parses aspects, salience and summaries") {
    Corpus corpus = load_corpus(fixtures::path("reviews.jsonl"), "tv");
    AnnotationSet ann = load_annotations(fixtures::path("annotations.jsonl"), corpus,
                                         {"general", "image", "sound", "price"});
    CHECK(ann.aspects.size() == 12);
    CHECK(ann.salience.size() == 12);
    CHECK(ann.summaries.size() == 4);
    CHECK(ann.warnings.empty());
}

TEST_CASE("load_annotations rejects dangling segments and foreign aspects") {
    Corpus corpus = load_corpus(fixtures::path("reviews.jsonl"), "tv");
    auto dir = fixtures::scratch_dir("annotations_bad");
    {
        std::ofstream out(dir + "/a.jsonl");
        out << R"({"kind":"aspect","segment_id":"nope","aspects":["image"]})" << "\n";
    }
    CHECK_THROWS_AS(load_annotations(dir + "/a.jsonl", corpus, {"image"}), ValidationError);
    {
        std::ofstream out(dir + "/b.jsonl");
        out << R"({"kind":"aspect","segment_id":"s1","aspects":["altitude"]})" << "\n";
    }
    CHECK_THROWS_AS(load_annotations(dir + "/b.jsonl", corpus, {"image"}), ValidationError);
    {
        std::ofstream out(dir + "/c.jsonl");
        out << R"({"kind":"aspect","segment_id":"s1","aspects":["image","price"]})" << "\n";
    }
    AnnotationSet multi = load_annotations(dir + "/c.jsonl", corpus, {"image", "price"});
    CHECK(multi.aspects[0].aspects == std::set<std::string>{"image", "price"});
}

TEST_CASE("over-budget gold summaries produce a warning, not an error") {
    Corpus corpus = load_corpus(fixtures::path("long_reviews.jsonl"), "tv");
    AnnotationSet ann = load_annotations(fixtures::path("long_annotations.jsonl"), corpus, {});
    CHECK(ann.summaries.size() == 1);
    REQUIRE(ann.warnings.size() == 1);
    CHECK(ann.warnings[0].find("110") != std::string::npos);
}

TEST_CASE("word_count counts whitespace words of raw text") {
    CHECK(word_count("") == 0);
    CHECK(word_count("one") == 1);
    CHECK(word_count("  two   words  ") == 2);
    CHECK(word_count("The picture is crisp and sharp.") == 6);
}
