#include <cmath>
#include <fstream>

#include "doctest.h"
#include "opsum/embeddings.hpp"
#include "opsum/errors.hpp"
#include "opsum/rng.hpp"
#include "support/fixtures.hpp"

using namespace opsum;

TEST_CASE("load_embeddings reads the declared table") {
    auto dir = fixtures::scratch_dir("emb_ok");
    {
        std::ofstream out(dir + "/v.txt");
        out << "2 3\nalpha 1 0 0\nbeta 0 0.5 1\n";
    }
    EmbeddingTable t = load_embeddings(dir + "/v.txt");
    CHECK(t.size() == 2);
    CHECK(t.dim() == 3);
    auto v = t.lookup("beta");
    REQUIRE(v.has_value());
    CHECK((*v)[1] == 0.5);
    CHECK(!t.lookup("gamma").has_value());
}

TEST_CASE("load_embeddings rejects short rows with the row number") {
    auto dir = fixtures::scratch_dir("emb_short");
    {
        std::ofstream out(dir + "/v.txt");
        out << "2 3\nalpha 1 0 0\nbeta 0 1\n";
    }
    try {
        load_embeddings(dir + "/v.txt");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("duplicate embedding rows keep the last occurrence and warn") {
    auto dir = fixtures::scratch_dir("emb_dup");
    {
        std::ofstream out(dir + "/v.txt");
        out << "2 2\nsame 1 1\nsame 2 2\n";
    }
    std::vector<std::string> warnings;
    EmbeddingTable t = load_embeddings(dir + "/v.txt", &warnings);
    CHECK(t.size() == 1);
    CHECK((*t.lookup("same"))[0] == 2.0);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("same") != std::string::npos);
}

TEST_CASE("embedding save/load round-trips bit-exactly") {
    EmbeddingTable t(3);
    Rng rng(5);
    Vec v(3);
    for (int i = 0; i < 10; ++i) {
        for (double& x : v) x = rng.uniform(-2, 2);
        t.insert("word" + std::to_string(i), v);
    }
    auto dir = fixtures::scratch_dir("emb_roundtrip");
    save_embeddings(t, dir + "/v.txt");
    EmbeddingTable t2 = load_embeddings(dir + "/v.txt");
    REQUIRE(t2.size() == t.size());
    for (const std::string& w : t.words()) {
        auto a = *t.lookup(w);
        auto b = *t2.lookup(w);
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    }
}

TEST_CASE("average_vector means over in-table tokens") {
    EmbeddingTable t(2);
    t.insert("a", Vec{1, 0});
    t.insert("b", Vec{0, 1});
    auto avg = average_vector({"a", "b"}, t);
    REQUIRE(avg.has_value());
    CHECK((*avg)[0] == doctest::Approx(0.5));
    CHECK((*avg)[1] == doctest::Approx(0.5));

    CHECK(!average_vector({"x", "y"}, t).has_value());

    auto same = average_vector({"a", "a"}, t);
    CHECK((*same)[0] == doctest::Approx(1.0));
    CHECK((*same)[1] == doctest::Approx(0.0));

    // unknown tokens are skipped, not zero-filled
    auto mixed = average_vector({"a", "zzz"}, t);
    CHECK((*mixed)[0] == doctest::Approx(1.0));
}

TEST_CASE("average_vector stays in the convex hull of its inputs") {
    EmbeddingTable t(3);
    Rng rng(11);
    Vec v(3);
    double lo = 1e9, hi = -1e9;
    for (int i = 0; i < 6; ++i) {
        for (double& x : v) {
            x = rng.uniform(-1, 1);
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        t.insert("w" + std::to_string(i), v);
    }
    auto avg = *average_vector({"w0", "w1", "w2", "w3", "w4", "w5"}, t);
    for (double x : avg) {
        CHECK(x >= lo - 1e-12);
        CHECK(x <= hi + 1e-12);
    }
}

TEST_CASE("cosine basics") {
    CHECK(cosine(Vec{1, 0}, Vec{0, 1}) == doctest::Approx(0.0));
    CHECK(cosine(Vec{1, 2}, Vec{2, 4}) == doctest::Approx(1.0));
    CHECK(cosine(Vec{1, 1}, Vec{1, 0}) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(cosine(Vec{0, 0}, Vec{1, 0}) == 0.0);  // zero-norm convention
    CHECK_THROWS(cosine(Vec{1}, Vec{1, 2}));
}

TEST_CASE("cosine of any nonzero vector with itself is 1") {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        Vec v(1 + rng.next_below(6));
        for (double& x : v) x = rng.uniform(-5, 5);
        if (norm(v) == 0.0) continue;
        CHECK(cosine(v, v) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

namespace {

double kmeans_objective(const std::vector<Vec>& points, const Centroids& centroids) {
    double total = 0;
    for (const Vec& p : points) {
        double best = 1e300;
        for (const Vec& c : centroids) best = std::min(best, squared_distance(p, c));
        total += best;
    }
    return total;
}

}  // namespace

TEST_CASE("kmeans fixed points") {
    std::vector<Vec> pts{{0, 0}, {1, 0}, {0, 1}};
    SUBCASE("k equal to distinct points returns the points") {
        Centroids c = kmeans(pts, 3, 50, 1);
        for (const Vec& p : pts) {
            bool found = false;
            for (const Vec& q : c) found = found || q == p;
            CHECK(found);
        }
    }
    SUBCASE("k=1 returns the mean") {
        Centroids c = kmeans(pts, 1, 50, 1);
        CHECK(c[0][0] == doctest::Approx(1.0 / 3));
        CHECK(c[0][1] == doctest::Approx(1.0 / 3));
    }
    SUBCASE("same seed twice gives identical centroids") {
        Centroids a = kmeans(pts, 2, 50, 9);
        Centroids b = kmeans(pts, 2, 50, 9);
        CHECK(a == b);
    }
    SUBCASE("k above the number of distinct vectors is an error") {
        std::vector<Vec> dup{{1, 1}, {1, 1}, {2, 2}};
        CHECK_THROWS_AS(kmeans(dup, 3, 50, 1), ValidationError);
        CHECK(kmeans(dup, 2, 50, 1).size() == 2);
    }
}

TEST_CASE("kmeans objective is non-increasing across iterations") {
    Rng rng(17);
    std::vector<Vec> pts;
    for (int i = 0; i < 40; ++i) {
        Vec v(3);
        for (double& x : v) x = rng.uniform(-1, 1);
        pts.push_back(v);
    }
    double prev = 1e300;
    for (std::size_t iters = 1; iters <= 8; ++iters) {
        Centroids c = kmeans(pts, 4, iters, 123);
        double obj = kmeans_objective(pts, c);
        CHECK(obj <= prev + 1e-9);
        prev = obj;
    }
}
