#include "opsum/summarizer.hpp"

#include <algorithm>

#include "opsum/errors.hpp"
#include "opsum/rng.hpp"

namespace opsum {

double salience(const Vec& aspect_probs, double polarity, std::size_t general_index) {
    if (general_index >= aspect_probs.size())
        throw ValidationError("general aspect index out of range");
    double max_p = *std::max_element(aspect_probs.begin(), aspect_probs.end());
    return std::abs(polarity) * (max_p - aspect_probs[general_index]);
}

std::vector<Opinion> rank_opinions(const std::vector<const Review*>& product_reviews,
                                   const AspectModelParams& aspect_params,
                                   const PolarityScorer& polarity_scorer,
                                   const EmbeddingTable& table, std::size_t general_index) {
    std::vector<Opinion> opinions;
    for (const Review* review : product_reviews) {
        for (const Segment& seg : review->segments) {
            auto pred = predict(aspect_params, table, seg.tokens);
            if (!pred) continue;
            auto pol = polarity_scorer.segment_polarity(seg.tokens);

            Opinion op;
            op.segment_id = seg.segment_id;
            op.review_id = review->review_id;
            op.text = seg.text;
            op.tokens = seg.tokens;
            op.aspect_probs = std::move(pred->probabilities);
            op.aspect_index = static_cast<std::size_t>(
                std::max_element(op.aspect_probs.begin(), op.aspect_probs.end()) -
                op.aspect_probs.begin());
            op.aspect_name = op.aspect_index < aspect_params.aspect_names.size()
                                 ? aspect_params.aspect_names[op.aspect_index]
                                 : std::to_string(op.aspect_index);
            op.polarity = pol.value_or(0.0);
            op.salience = salience(op.aspect_probs, op.polarity, general_index);
            op.word_count = word_count(seg.text);
            opinions.push_back(std::move(op));
        }
    }
    std::stable_sort(opinions.begin(), opinions.end(),
                     [](const Opinion& a, const Opinion& b) { return a.salience > b.salience; });
    return opinions;
}

Summary redundancy_filter(const std::string& product_id, const std::vector<Opinion>& ranked,
                          const EmbeddingTable& table, double threshold, std::size_t budget) {
    Summary summary;
    summary.product_id = product_id;
    std::vector<Vec> selected_vectors;
    for (const Opinion& op : ranked) {
        if (summary.word_count + op.word_count > budget) continue;
        auto vec = average_vector(op.tokens, table);
        if (!vec) continue;
        bool redundant = false;
        for (const Vec& other : selected_vectors) {
            if (cosine(*vec, other) >= threshold) {
                redundant = true;
                break;
            }
        }
        if (redundant) continue;
        summary.segments.push_back(
            {op.segment_id, op.text, op.aspect_name, op.polarity, op.salience});
        summary.word_count += op.word_count;
        selected_vectors.push_back(std::move(*vec));
    }
    return summary;
}

namespace {

struct Candidate {
    const Segment* segment;
    std::size_t words;
};

std::vector<Candidate> all_segments(const std::vector<const Review*>& reviews) {
    std::vector<Candidate> out;
    for (const Review* r : reviews)
        for (const Segment& s : r->segments) out.push_back({&s, word_count(s.text)});
    return out;
}

void append_segment(Summary& summary, const Candidate& c) {
    summary.segments.push_back({c.segment->segment_id, c.segment->text, "", 0.0, 0.0});
    summary.word_count += c.words;
}

}  // namespace

Summary random_summary(const std::string& product_id,
                       const std::vector<const Review*>& product_reviews, std::size_t budget,
                       std::uint64_t seed) {
    if (product_reviews.empty()) throw ValidationError("random_summary: product has no reviews");
    std::vector<Candidate> pool = all_segments(product_reviews);
    Rng rng(seed);
    rng.shuffle(pool);
    Summary summary;
    summary.product_id = product_id;
    for (const Candidate& c : pool)
        if (summary.word_count + c.words <= budget) append_segment(summary, c);
    return summary;
}

Summary lead_summary(const std::string& product_id,
                     const std::vector<const Review*>& product_reviews, std::size_t budget) {
    if (product_reviews.empty()) throw ValidationError("lead_summary: product has no reviews");
    Summary summary;
    summary.product_id = product_id;
    std::size_t depth = 0;
    bool any = true;
    while (any) {
        any = false;
        for (const Review* r : product_reviews) {
            if (depth >= r->segments.size()) continue;
            any = true;
            const Segment& s = r->segments[depth];
            const std::size_t words = word_count(s.text);
            if (summary.word_count + words <= budget) append_segment(summary, {&s, words});
        }
        ++depth;
    }
    return summary;
}

}  // namespace opsum
