#include "opsum/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "opsum/errors.hpp"
#include "opsum/rng.hpp"

namespace opsum {

bool EmbeddingTable::insert(const std::string& word, std::span<const double> vector) {
    if (vector.size() != dim_) throw ValidationError("embedding dimension mismatch for " + word);
    auto it = index_.find(word);
    if (it != index_.end()) {
        std::copy(vector.begin(), vector.end(), data_.begin() + it->second * dim_);
        return false;
    }
    index_[word] = words_.size();
    words_.push_back(word);
    data_.insert(data_.end(), vector.begin(), vector.end());
    return true;
}

EmbeddingTable load_embeddings(const std::string& path, std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open embedding file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw ParseError("embedding file is empty", 1);
    std::istringstream header(line);
    long long count = -1, dim = -1;
    if (!(header >> count >> dim) || count < 0 || dim <= 0)
        throw ParseError("expected 'count dim' header", 1);

    EmbeddingTable table(static_cast<std::size_t>(dim));
    Vec vector(static_cast<std::size_t>(dim));
    for (long long row = 0; row < count; ++row) {
        long line_no = static_cast<long>(row) + 2;
        if (!std::getline(in, line))
            throw ParseError("expected " + std::to_string(count) + " rows, found " +
                                 std::to_string(row), line_no);
        std::istringstream ss(line);
        std::string word;
        if (!(ss >> word)) throw ParseError("empty embedding row", line_no);
        for (long long j = 0; j < dim; ++j)
            if (!(ss >> vector[static_cast<std::size_t>(j)]))
                throw ParseError("row has fewer than " + std::to_string(dim) + " values",
                                 line_no);
        double extra;
        if (ss >> extra) throw ParseError("row has more than " + std::to_string(dim) + " values",
                                          line_no);
        if (!table.insert(word, vector) && warnings)
            warnings->push_back("duplicate embedding for '" + word + "', keeping last");
    }
    return table;
}

void save_embeddings(const EmbeddingTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write embedding file: " + path);
    out << table.size() << ' ' << table.dim() << '\n';
    char buf[64];
    for (const std::string& w : table.words()) {
        out << w;
        auto v = *table.lookup(w);
        for (double x : v) {
            std::snprintf(buf, sizeof(buf), " %.17g", x);
            out << buf;
        }
        out << '\n';
    }
}

std::optional<Vec> average_vector(const std::vector<std::string>& tokens,
                                  const EmbeddingTable& table) {
    Vec sum(table.dim(), 0.0);
    std::size_t hits = 0;
    for (const std::string& t : tokens) {
        if (auto v = table.lookup(t)) {
            axpy(1.0, *v, sum);
            ++hits;
        }
    }
    if (hits == 0) return std::nullopt;
    for (double& x : sum) x /= static_cast<double>(hits);
    return sum;
}

Centroids kmeans(const std::vector<Vec>& vectors, std::size_t k, std::size_t max_iters,
                 std::uint64_t seed) {
    if (k < 1) throw ValidationError("kmeans: k must be >= 1");
    if (vectors.empty()) throw ValidationError("kmeans: no input vectors");

    // initialization draws from distinct vector values
    std::vector<std::size_t> distinct;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        bool dup = false;
        for (std::size_t j : distinct)
            if (vectors[j] == vectors[i]) { dup = true; break; }
        if (!dup) distinct.push_back(i);
    }
    if (k > distinct.size())
        throw ValidationError("kmeans: k=" + std::to_string(k) + " exceeds " +
                              std::to_string(distinct.size()) + " distinct vectors");

    Rng rng(seed);
    rng.shuffle(distinct);
    Centroids centroids;
    centroids.reserve(k);
    for (std::size_t c = 0; c < k; ++c) centroids.push_back(vectors[distinct[c]]);

    const std::size_t n = vectors.size();
    std::vector<std::size_t> assignment(n, k);  // k = unassigned
    for (std::size_t iter = 0; iter < max_iters; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = 0;
            double best_dist = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < k; ++c) {
                double d = squared_distance(vectors[i], centroids[c]);
                if (d < best_dist) { best_dist = d; best = c; }
            }
            if (assignment[i] != best) { assignment[i] = best; changed = true; }
        }
        if (!changed) break;
        std::vector<std::size_t> counts(k, 0);
        Centroids sums(k, Vec(vectors[0].size(), 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            axpy(1.0, vectors[i], sums[assignment[i]]);
            ++counts[assignment[i]];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) continue;  // empty cluster keeps its previous centroid
            for (double& x : sums[c]) x /= static_cast<double>(counts[c]);
            centroids[c] = std::move(sums[c]);
        }
    }
    return centroids;
}

}  // namespace opsum
