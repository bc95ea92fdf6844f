#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "opsum/aspect_model.hpp"  // GradientCheckResult
#include "opsum/checkpoint.hpp"
#include "opsum/corpus.hpp"
#include "opsum/embeddings.hpp"
#include "opsum/math.hpp"

namespace opsum {

// Multiple-instance sentiment model: segment-level predictions are learned
// from review-level ratings only.
struct MilConfig {
    std::size_t classes = 5;  // rating scale size
    std::vector<std::size_t> windows = {3, 4, 5};
    std::size_t feature_maps = 100;  // per window width
    std::size_t attention_hidden = 100;
    double learning_rate = 1e-4;
    std::size_t epochs = 10;
    std::size_t batch_size = 50;  // reviews per step
    std::uint64_t seed = 1;
};

struct GruCell {
    Mat w_update, u_update;
    Vec b_update;
    Mat w_reset, u_reset;
    Vec b_reset;
    Mat w_cand, u_cand;
    Vec b_cand;
};

struct MilParams {
    MilConfig config;
    std::vector<Mat> filters;      // per window: F x (width*d)
    std::vector<Vec> filter_bias;  // per window: F
    Mat segment_weight;            // classes x (F*|windows|)
    Vec segment_bias;
    GruCell forward_gru, backward_gru;  // input dim = classes, hidden = attention_hidden
    Mat attention_weight;               // H x H
    Vec attention_bias;                 // H
    Vec attention_context;              // H
    Vec class_weights;                  // omega, fixed, never trained
};

// (-1, -1 + 2/(M-1), ..., +1)
Vec sentiment_class_weights(std::size_t classes);

// Convolution over the token embedding sequence per window width,
// max-over-time pooling, concatenation, tanh. Segments shorter than the
// largest window are zero-padded to it. Miss if no token is in the table.
std::optional<Vec> encode_segment_cnn(const std::vector<std::string>& tokens,
                                      const EmbeddingTable& table, const MilParams& params);

// softmax of a linear layer over the segment encoding
Vec segment_sentiment(const Vec& encoding, const MilParams& params);

struct DocumentPrediction {
    Vec probabilities;  // simplex over classes
    Vec attention;      // alpha, one weight per segment
};

// Bidirectional gated recurrence over the sequence of segment prediction
// vectors (forward/backward states summed); attention logits come from a
// learned projection of the states; the document prediction is the
// attention-weighted mix of segment predictions.
DocumentPrediction document_prediction(const std::vector<Vec>& segment_predictions,
                                       const MilParams& params);

// omega . p, in [-1, +1] for any simplex p
double polarity(const Vec& sentiment_probs, const Vec& class_weights);

// NLL of the review's rating; nullopt when no segment has in-vocabulary tokens
std::optional<double> review_nll(const Review& review, const MilParams& params,
                                 const EmbeddingTable& table);

struct MilTrainStats {
    std::vector<double> epoch_nll;  // mean per scored review
    std::size_t skipped_segments = 0;
    std::size_t skipped_reviews = 0;
};

MilParams train_mil(const Corpus& corpus, const MilConfig& config, const EmbeddingTable& table,
                    MilTrainStats* stats = nullptr);

// Seeded parameter initialization (also the state after zero epochs).
MilParams initialize_mil_params(const MilConfig& config, std::size_t dim);

// Finite-difference check of the batch NLL gradient over every trainable
// scalar (class_weights are excluded: they are frozen).
GradientCheckResult mil_gradient_check(const MilParams& params, const std::vector<Review>& batch,
                                       const EmbeddingTable& table, double epsilon = 1e-5);

void save_mil_model(const MilParams& params, const std::string& path);
MilParams load_mil_model(const std::string& path);

// Common interface for segment polarity backends.
class PolarityScorer {
public:
    virtual ~PolarityScorer() = default;
    virtual std::optional<double> segment_polarity(const std::vector<std::string>& tokens) const = 0;
};

class MilPolarityScorer : public PolarityScorer {
public:
    MilPolarityScorer(MilParams params, const EmbeddingTable& table)
        : params_(std::move(params)), table_(&table) {}
    std::optional<double> segment_polarity(const std::vector<std::string>& tokens) const override;

private:
    MilParams params_;
    const EmbeddingTable* table_;
};

// Training-free fallback: each token scores the mean centered rating
// (rating - 3)/2 of the reviews it occurs in; a segment scores the mean
// over its known tokens, clamped to [-1, +1].
class LexiconPolarityScorer : public PolarityScorer {
public:
    static LexiconPolarityScorer fit(const Corpus& corpus);
    std::optional<double> segment_polarity(const std::vector<std::string>& tokens) const override;
    double token_score(const std::string& token) const;

private:
    std::unordered_map<std::string, double> scores_;
};

}  // namespace opsum
