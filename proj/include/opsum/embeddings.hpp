#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "opsum/math.hpp"

namespace opsum {

// Frozen word-vector table. Unknown words are a distinguishable miss,
// never a silent zero vector.
class EmbeddingTable {
public:
    EmbeddingTable() = default;
    EmbeddingTable(std::size_t dimension) : dim_(dimension) {}

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return index_.size(); }

    std::optional<std::span<const double>> lookup(const std::string& word) const {
        auto it = index_.find(word);
        if (it == index_.end()) return std::nullopt;
        return std::span<const double>(data_.data() + it->second * dim_, dim_);
    }

    bool contains(const std::string& word) const { return index_.contains(word); }

    // inserts or overwrites; returns false when the word already existed
    bool insert(const std::string& word, std::span<const double> vector);

    const std::vector<std::string>& words() const { return words_; }

private:
    std::size_t dim_ = 0;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::string> words_;
    std::vector<double> data_;
};

// Whitespace-delimited text format with a "count dim" header line.
// Duplicate words: last occurrence wins, with a warning appended to
// `warnings` when provided.
EmbeddingTable load_embeddings(const std::string& path,
                               std::vector<std::string>* warnings = nullptr);

void save_embeddings(const EmbeddingTable& table, const std::string& path);

// Arithmetic mean over the tokens found in the table; miss if none are.
std::optional<Vec> average_vector(const std::vector<std::string>& tokens,
                                  const EmbeddingTable& table);

using Centroids = std::vector<Vec>;

// Lloyd's algorithm, squared Euclidean distance, seeded initialization with
// k distinct points drawn without replacement. Deterministic given seed.
Centroids kmeans(const std::vector<Vec>& vectors, std::size_t k, std::size_t max_iters,
                 std::uint64_t seed);

}  // namespace opsum
