#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "opsum/errors.hpp"
#include "opsum/rng.hpp"
#include "opsum/summarizer.hpp"
#include "support/fixtures.hpp"

using namespace opsum;

namespace {

// polarity fixed per segment id, so salience inputs are fully hand-set
class FixedPolarity : public PolarityScorer {
public:
    explicit FixedPolarity(std::map<std::string, double> by_first_token)
        : by_first_token_(std::move(by_first_token)) {}
    std::optional<double> segment_polarity(
        const std::vector<std::string>& tokens) const override {
        if (tokens.empty()) return std::nullopt;
        auto it = by_first_token_.find(tokens[0]);
        if (it == by_first_token_.end()) return 0.0;
        return it->second;
    }

private:
    std::map<std::string, double> by_first_token_;
};

}  // namespace

TEST_CASE("salience formula") {
    CHECK(salience(Vec{0.2, 0.5, 0.3}, 0.0, 0) == 0.0);
    // argmax is the general aspect
    CHECK(salience(Vec{0.7, 0.2, 0.1}, 0.9, 0) == doctest::Approx(0.0));
    // |pol| * (max - general) = 0.8 * (0.7 - 0.1)
    CHECK(salience(Vec{0.1, 0.7, 0.2}, -0.8, 0) == doctest::Approx(0.48));

    SUBCASE("always within [0, 1] for simplex inputs") {
        Rng rng(12);
        for (int trial = 0; trial < 100; ++trial) {
            Vec p(2 + rng.next_below(5));
            double sum = 0;
            for (double& x : p) {
                x = rng.next_double();
                sum += x;
            }
            for (double& x : p) x /= sum;
            double s = salience(p, rng.uniform(-1, 1), rng.next_below(p.size()));
            CHECK(s >= 0.0);
            CHECK(s <= 1.0);
        }
    }
}

namespace {

// one-hot embeddings make single-token segments produce hand-computable
// aspect distributions: p = softmax(scale * e_aspect)
struct RankWorld {
    EmbeddingTable table;
    AspectModelParams params;
    std::vector<Review> reviews;
    std::vector<const Review*> review_ptrs;

    RankWorld() : table(3) {
        table.insert("gen", Vec{1, 0, 0});
        table.insert("img", Vec{0, 1, 0});
        table.insert("snd", Vec{0, 0, 1});

        params.config.variant = AspectVariant::abae_init;
        params.config.aspect_count = 3;
        params.config.dim = 3;
        params.aspect_names = {"general", "image", "sound"};
        params.attention = Mat::identity(3);
        params.classifier_weight = Mat(3, 3);
        for (int i = 0; i < 3; ++i) params.classifier_weight(i, i) = 3.0;
        params.classifier_bias = Vec(3, 0.0);
        params.aspect_embeddings = Mat::identity(3);
    }

    void add(const std::string& id, const std::string& token, const std::string& review_id) {
        Review* review = nullptr;
        for (Review& r : reviews)
            if (r.review_id == review_id) review = &r;
        if (!review) {
            reviews.push_back({});
            review = &reviews.back();
            review->review_id = review_id;
            review->product_id = "p";
            review->rating = 4;
        }
        Segment s;
        s.segment_id = id;
        s.review_id = review_id;
        s.tokens = {token};
        s.text = token + " words here";
        review->segments.push_back(std::move(s));
    }

    std::vector<const Review*> ptrs() {
        review_ptrs.clear();
        for (const Review& r : reviews) review_ptrs.push_back(&r);
        return review_ptrs;
    }
};

}  // namespace

TEST_CASE("rank_opinions matches a brute-force sort of the salience values") {
    RankWorld world;
    world.add("s1", "img", "r1");
    world.add("s2", "snd", "r1");
    world.add("s3", "gen", "r1");
    world.add("s4", "img", "r2");
    world.add("s5", "snd", "r2");

    FixedPolarity polarity({{"img", 0.9}, {"snd", -0.5}, {"gen", 0.95}});
    auto ranked = rank_opinions(world.ptrs(), world.params, polarity, world.table, 0);
    REQUIRE(ranked.size() == 5);

    // independent recomputation: p = softmax(3 * e_k), eq-12 value per segment
    const double hi = std::exp(3.0) / (std::exp(3.0) + 2.0);
    const double lo = 1.0 / (std::exp(3.0) + 2.0);
    auto expect_sal = [&](double pol, bool general) {
        return general ? 0.0 : std::abs(pol) * (hi - lo);
    };
    std::vector<std::pair<std::string, double>> expected = {
        {"s1", expect_sal(0.9, false)},  {"s2", expect_sal(-0.5, false)},
        {"s3", expect_sal(0.95, true)},  {"s4", expect_sal(0.9, false)},
        {"s5", expect_sal(-0.5, false)},
    };
    std::stable_sort(expected.begin(), expected.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(ranked[i].segment_id == expected[i].first);
        CHECK(ranked[i].salience == doctest::Approx(expected[i].second).epsilon(1e-10));
    }
    // ties (s1 vs s4, s2 vs s5) kept document order
    CHECK(ranked[0].segment_id == "s1");
    CHECK(ranked[1].segment_id == "s4");
}

TEST_CASE("all-general predictions fall back to document order") {
    RankWorld world;
    world.add("s1", "gen", "r1");
    world.add("s2", "gen", "r1");
    world.add("s3", "gen", "r2");
    FixedPolarity polarity({{"gen", 0.8}});
    auto ranked = rank_opinions(world.ptrs(), world.params, polarity, world.table, 0);
    REQUIRE(ranked.size() == 3);
    for (const Opinion& op : ranked) CHECK(op.salience == 0.0);
    CHECK(ranked[0].segment_id == "s1");
    CHECK(ranked[1].segment_id == "s2");
    CHECK(ranked[2].segment_id == "s3");
}

namespace {

Opinion make_opinion(const std::string& id, const std::string& token, double sal,
                     std::size_t words) {
    Opinion op;
    op.segment_id = id;
    op.review_id = "r";
    op.tokens = {token};
    op.text = token;
    for (std::size_t i = 1; i < words; ++i) op.text += " filler";
    op.word_count = words;
    op.salience = sal;
    op.aspect_name = "image";
    op.polarity = 0.5;
    op.aspect_probs = {0.1, 0.8, 0.1};
    return op;
}

EmbeddingTable redundancy_table() {
    EmbeddingTable t(3);
    t.insert("ax", Vec{1, 0, 0});
    t.insert("ay", Vec{0.95, 0.05, 0});  // nearly parallel to ax
    t.insert("bx", Vec{0, 1, 0});
    t.insert("cx", Vec{0, 0, 1});
    return t;
}

}  // namespace

TEST_CASE("redundancy_filter rejects similar candidates and respects the budget") {
    EmbeddingTable table = redundancy_table();

    SUBCASE("identical candidates collapse to one") {
        std::vector<Opinion> ranked = {make_opinion("s1", "ax", 0.9, 5),
                                       make_opinion("s2", "ax", 0.8, 5),
                                       make_opinion("s3", "ax", 0.7, 5)};
        Summary s = redundancy_filter("p", ranked, table, 0.5, 100);
        REQUIRE(s.segments.size() == 1);
        CHECK(s.segments[0].segment_id == "s1");
    }

    SUBCASE("orthogonal candidates fill the budget") {
        std::vector<Opinion> ranked;
        const char* toks[] = {"ax", "bx", "cx"};
        for (int i = 0; i < 12; ++i)
            ranked.push_back(make_opinion("s" + std::to_string(i), toks[i % 3], 1.0 - 0.01 * i,
                                          10));
        // every third shares a direction, so only the first of each group survives
        Summary s = redundancy_filter("p", ranked, table, 0.5, 100);
        CHECK(s.segments.size() == 3);
        CHECK(s.word_count == 30);
        Summary all = redundancy_filter("p", ranked, table, 2.0, 100);
        CHECK(all.segments.size() == 10);  // budget-bound
        CHECK(all.word_count == 100);
    }

    SUBCASE("near-parallel vectors fall to the threshold") {
        std::vector<Opinion> ranked = {make_opinion("s1", "ax", 0.9, 5),
                                       make_opinion("s2", "ay", 0.8, 5)};
        CHECK(redundancy_filter("p", ranked, table, 0.5, 100).segments.size() == 1);
        // cosine(ax, ay) ~ 0.9986, still below a 0.999 threshold
        CHECK(redundancy_filter("p", ranked, table, 0.9999, 100).segments.size() == 2);
    }

    SUBCASE("budget skip-and-continue picks later short segments") {
        std::vector<Opinion> ranked = {make_opinion("s1", "ax", 0.9, 60),
                                       make_opinion("s2", "bx", 0.8, 60),
                                       make_opinion("s3", "cx", 0.7, 30)};
        Summary s = redundancy_filter("p", ranked, table, 0.5, 100);
        REQUIRE(s.segments.size() == 2);
        CHECK(s.segments[0].segment_id == "s1");
        CHECK(s.segments[1].segment_id == "s3");
        CHECK(s.word_count == 90);
    }
}

TEST_CASE("redundancy_filter output verified by a brute-force greedy oracle") {
    Rng rng(909);
    EmbeddingTable table(4);
    std::vector<std::string> words;
    for (int i = 0; i < 8; ++i) {
        Vec v(4);
        for (double& x : v) x = rng.uniform(-1, 1);
        words.push_back("w" + std::to_string(i));
        table.insert(words.back(), v);
    }

    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Opinion> ranked;
        const std::size_t n = 3 + rng.next_below(8);
        for (std::size_t i = 0; i < n; ++i) {
            Opinion op = make_opinion("s" + std::to_string(i), words[rng.next_below(8)],
                                      1.0 - 0.05 * static_cast<double>(i),
                                      3 + rng.next_below(10));
            ranked.push_back(op);
        }
        const double threshold = 0.3 + 0.4 * rng.next_double();
        const std::size_t budget = 20 + rng.next_below(40);
        Summary got = redundancy_filter("p", ranked, table, threshold, budget);

        // independent greedy trace
        std::vector<std::string> expected_ids;
        std::vector<Vec> chosen;
        std::size_t used = 0;
        for (const Opinion& op : ranked) {
            if (used + op.word_count > budget) continue;
            Vec v = *average_vector(op.tokens, table);
            bool clash = false;
            for (const Vec& c : chosen) clash = clash || cosine(v, c) >= threshold;
            if (clash) continue;
            expected_ids.push_back(op.segment_id);
            chosen.push_back(v);
            used += op.word_count;
        }
        std::vector<std::string> got_ids;
        for (const auto& seg : got.segments) got_ids.push_back(seg.segment_id);
        CHECK(got_ids == expected_ids);
        CHECK(got.word_count == used);
        CHECK(got.word_count <= budget);

        // every selected pair satisfies the cosine bound
        for (std::size_t i = 0; i < chosen.size(); ++i)
            for (std::size_t j = i + 1; j < chosen.size(); ++j)
                CHECK(cosine(chosen[i], chosen[j]) < threshold);

        // selection is a subsequence of the ranking
        std::size_t cursor = 0;
        for (const Opinion& op : ranked)
            if (cursor < got_ids.size() && got_ids[cursor] == op.segment_id) ++cursor;
        CHECK(cursor == got_ids.size());

        // the filter never beats the unfiltered selection's salience mass
        Summary unfiltered = redundancy_filter("p", ranked, table, 2.0, budget);
        double mass = 0, unfiltered_mass = 0;
        for (const auto& seg : got.segments) mass += seg.salience;
        for (const auto& seg : unfiltered.segments) unfiltered_mass += seg.salience;
        CHECK(mass <= unfiltered_mass + 1e-12);
    }
}

namespace {

std::vector<Review> baseline_reviews() {
    std::vector<Review> reviews;
    for (int r = 0; r < 3; ++r) {
        Review review;
        review.review_id = "r" + std::to_string(r);
        review.product_id = "p";
        review.rating = 3;
        for (int s = 0; s < 3; ++s) {
            Segment seg;
            seg.segment_id = review.review_id + "_s" + std::to_string(s);
            seg.review_id = review.review_id;
            seg.text = "seg " + seg.segment_id + " has five words";  // 5 words
            seg.tokens = {"seg"};
            review.segments.push_back(std::move(seg));
        }
        reviews.push_back(std::move(review));
    }
    return reviews;
}

}  // namespace

TEST_CASE("random and lead baselines") {
    std::vector<Review> reviews = baseline_reviews();
    std::vector<const Review*> ptrs;
    for (const Review& r : reviews) ptrs.push_back(&r);

    SUBCASE("a single short segment under a large budget is selected") {
        Review solo;
        solo.review_id = "r";
        solo.product_id = "p";
        solo.rating = 3;
        Segment seg;
        seg.segment_id = "only";
        seg.review_id = "r";
        seg.text = "just five words right here";
        solo.segments.push_back(seg);
        std::vector<const Review*> one = {&solo};
        CHECK(random_summary("p", one, 100, 5).segments.size() == 1);
        CHECK(lead_summary("p", one, 100).segments.size() == 1);
    }

    SUBCASE("random is deterministic per seed and budget-bound") {
        Summary a = random_summary("p", ptrs, 20, 42);
        Summary b = random_summary("p", ptrs, 20, 42);
        REQUIRE(a.segments.size() == b.segments.size());
        for (std::size_t i = 0; i < a.segments.size(); ++i)
            CHECK(a.segments[i].segment_id == b.segments[i].segment_id);
        CHECK(a.word_count <= 20);
        CHECK(a.segments.size() == 4);  // four five-word segments fit exactly
    }

    SUBCASE("lead takes leading segments round-robin") {
        Summary s = lead_summary("p", ptrs, 100);
        REQUIRE(s.segments.size() == 9);
        CHECK(s.segments[0].segment_id == "r0_s0");
        CHECK(s.segments[1].segment_id == "r1_s0");
        CHECK(s.segments[2].segment_id == "r2_s0");
        CHECK(s.segments[3].segment_id == "r0_s1");
        Summary tight = lead_summary("p", ptrs, 12);
        CHECK(tight.segments.size() == 2);
        CHECK(tight.word_count == 10);
    }
}
