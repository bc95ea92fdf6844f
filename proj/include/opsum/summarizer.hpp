#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "opsum/aspect_model.hpp"
#include "opsum/corpus.hpp"
#include "opsum/embeddings.hpp"
#include "opsum/polarity.hpp"

namespace opsum {

// One scored segment: the unit that gets ranked and selected into summaries.
struct Opinion {
    std::string segment_id;
    std::string review_id;
    std::string text;
    std::vector<std::string> tokens;
    Vec aspect_probs;
    std::size_t aspect_index = 0;  // argmax, ties to the lowest index
    std::string aspect_name;
    double polarity = 0.0;
    double salience = 0.0;
    std::size_t word_count = 0;
};

struct SummarySegment {
    std::string segment_id;
    std::string text;
    std::string aspect;
    double polarity = 0.0;
    double salience = 0.0;
};

struct Summary {
    std::string product_id;
    std::vector<SummarySegment> segments;
    std::size_t word_count = 0;
};

// |pol| * (max_i p_i - p_general); zero whenever the general aspect wins.
double salience(const Vec& aspect_probs, double polarity, std::size_t general_index);

// One opinion per segment with in-vocabulary tokens, sorted by descending
// salience; ties keep document order (review order, then segment order).
std::vector<Opinion> rank_opinions(const std::vector<const Review*>& product_reviews,
                                   const AspectModelParams& aspect_params,
                                   const PolarityScorer& polarity_scorer,
                                   const EmbeddingTable& table, std::size_t general_index);

// Greedy scan in rank order: a candidate is kept iff its plain-average
// vector stays below `threshold` cosine similarity to every selected
// segment and the word budget is not exceeded; rejected candidates are
// skipped and the scan continues.
Summary redundancy_filter(const std::string& product_id, const std::vector<Opinion>& ranked,
                          const EmbeddingTable& table, double threshold, std::size_t budget);

// Baselines. Random samples segments without replacement under the budget;
// lead takes each review's leading segments round-robin.
Summary random_summary(const std::string& product_id,
                       const std::vector<const Review*>& product_reviews, std::size_t budget,
                       std::uint64_t seed);
Summary lead_summary(const std::string& product_id,
                     const std::vector<const Review*>& product_reviews, std::size_t budget);

}  // namespace opsum
