#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "opsum/corpus.hpp"
#include "opsum/embeddings.hpp"

namespace opsum {

// Per-aspect ranked seed words with weights on the probability simplex.
struct SeedSet {
    // aspect order is the domain's inventory order
    std::vector<std::string> aspect_names;
    // aspect name -> ordered (word, weight) pairs, same length for all aspects
    std::map<std::string, std::vector<std::pair<std::string, double>>> seeds;

    std::size_t seeds_per_aspect() const {
        return seeds.empty() ? 0 : seeds.begin()->second.size();
    }
    void validate(const EmbeddingTable& table) const;
};

// Clarity scores for one aspect. Only terms occurring in the aspect's
// segments are stored; everything else scores 0 by convention.
class ClarityScores {
public:
    double score(const std::string& word) const {
        auto it = scores_.find(word);
        return it == scores_.end() ? 0.0 : it->second;
    }
    const std::map<std::string, double>& occurring() const { return scores_; }

    // descending score; ties and the non-occurring tail break lexicographically
    std::vector<std::string> ranked() const;

    friend ClarityScores clarity_scores(
        const std::vector<std::pair<const Segment*, std::set<std::string>>>& labeled,
        const std::string& aspect, const Vocabulary& vocabulary);

private:
    std::map<std::string, double> scores_;
};

// Relative-entropy style term weighting: score(w) = t_a(w) * log2(t_a(w)/t(w))
// where t_a and t are l1-normalized tf-idf weights over the aspect's segments
// and over all labeled segments, treated as two pseudo-documents. tf is the
// raw count; idf = ln(N/df) with df and N over the labeled segments. Only
// vocabulary words are scored.
ClarityScores clarity_scores(
    const std::vector<std::pair<const Segment*, std::set<std::string>>>& labeled,
    const std::string& aspect, const Vocabulary& vocabulary);

// Top-l positively-scored in-table words per aspect; ties break
// lexicographically; weights are the scores renormalized to sum to one.
SeedSet extract_seeds(const std::map<std::string, ClarityScores>& scores_per_aspect,
                      const std::vector<std::string>& aspect_order, std::size_t l,
                      const EmbeddingTable& table);

// One line per aspect: name, then tab-separated word:weight pairs.
void save_seeds(const SeedSet& seeds, const std::string& path);
SeedSet load_seeds(const std::string& path, const EmbeddingTable& table);

}  // namespace opsum
