#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "opsum/checkpoint.hpp"
#include "opsum/corpus.hpp"
#include "opsum/embeddings.hpp"
#include "opsum/math.hpp"
#include "opsum/seeds.hpp"

namespace opsum {

// abae:      trainable aspect matrix, k-means initialized
// abae_init: aspect matrix frozen at per-aspect seed centroids
// mate:      aspect rows are fixed convex combinations of seed embeddings
// mate_mt:   mate plus the domain-classification objective
enum class AspectVariant { abae, abae_init, mate, mate_mt };

AspectVariant aspect_variant_from_string(const std::string& name);
std::string to_string(AspectVariant v);

struct AspectModelConfig {
    std::size_t aspect_count = 0;        // K
    std::size_t dim = 0;                 // d, taken from the embedding table
    AspectVariant variant = AspectVariant::mate;
    std::size_t seeds_per_aspect = 30;   // l
    std::size_t negative_samples = 20;   // k_n
    double multitask_weight = 10.0;      // lambda, mate_mt only
    double learning_rate = 1e-4;
    std::size_t batch_size = 50;
    std::size_t epochs = 10;
    std::uint64_t seed = 1;
};

struct AspectModelParams {
    AspectModelConfig config;
    std::vector<std::string> aspect_names;
    std::vector<std::string> domain_names;  // mate_mt only, in-domain first

    Mat attention;          // M: d x d, trainable
    Mat classifier_weight;  // W: K x d, trainable
    Vec classifier_bias;    // b: K, trainable
    Mat domain_weight;      // W_C: D x d, trainable (mate_mt)
    Vec domain_bias;        // b_C: D, trainable (mate_mt)

    // aspect source; exactly one of the two is populated
    Mat aspect_embeddings;          // A: K x d (abae trainable, abae_init frozen)
    std::vector<Mat> seed_matrices; // A_i: l x d, frozen (mate variants)
    std::vector<Vec> seed_weights;  // z_i: l, frozen (mate variants)

    bool uses_seed_matrices() const {
        return config.variant == AspectVariant::mate || config.variant == AspectVariant::mate_mt;
    }
    bool multitask() const { return config.variant == AspectVariant::mate_mt; }
    bool aspect_matrix_trainable() const { return config.variant == AspectVariant::abae; }
};

struct SegmentEncoding {
    Vec vector;     // v_s
    Vec attention;  // c, one weight per in-vocabulary token
};

struct AspectPrediction {
    Vec probabilities;  // p over K aspects
    Vec attention;
};

// Attention encoder: u_i = x_i' M a with a the plain token average,
// c = softmax(u), v = sum c_i x_i. Miss when no token is in the table.
std::optional<SegmentEncoding> encode_segment(const std::vector<std::string>& tokens,
                                              const EmbeddingTable& table,
                                              const Mat& attention_matrix);

// softmax(W v + b)
Vec predict_aspects(const Vec& segment_vector, const Mat& classifier_weight,
                    const Vec& classifier_bias);

// For mate variants, row i is A_i' z_i; otherwise the stored matrix.
Mat aspect_matrix(const AspectModelParams& params);

// r = A' p
Vec reconstruct(const Vec& aspect_probs, const Mat& aspect_mat);

// sum_i max(0, 1 - r.v + r.n_i)
double reconstruction_loss(const Vec& segment_vector, const Vec& reconstruction,
                           const std::vector<Vec>& negatives);

std::optional<AspectPrediction> predict(const AspectModelParams& params,
                                        const EmbeddingTable& table,
                                        const std::vector<std::string>& tokens);

// One training example for loss evaluation and gradient checking. Negatives
// are plain-average vectors of sampled in-domain segments; empty for
// classification-only examples.
struct BatchSegment {
    std::vector<std::string> tokens;
    std::vector<Vec> negatives;
    std::size_t domain_index = 0;
};

// J_r over `in_domain` plus lambda-weighted domain NLL over both batches
// (in-domain segments are classified too; out-of-domain segments are never
// reconstructed).
double multitask_loss(const std::vector<BatchSegment>& in_domain,
                      const std::vector<BatchSegment>& all_domain,
                      const AspectModelParams& params, const EmbeddingTable& table,
                      double lambda);

struct AspectTrainStats {
    std::vector<double> epoch_reconstruction;  // mean hinge loss per segment
    std::vector<double> epoch_domain_nll;      // mean NLL per classified segment
    std::size_t skipped_segments = 0;          // no in-vocabulary tokens
};

// Adam training, deterministic for a given config.seed: initialization,
// shuffling, negative sampling and domain batches each draw from their own
// fixed-offset stream. `vocabulary` is required for the abae variant
// (k-means aspect initialization); `seeds` for the other three.
AspectModelParams train_aspect_model(const Corpus& in_domain,
                                     const std::vector<Corpus>& out_of_domain,
                                     const AspectModelConfig& config,
                                     const EmbeddingTable& table, const SeedSet* seeds,
                                     const Vocabulary* vocabulary = nullptr,
                                     AspectTrainStats* stats = nullptr);

struct GradientCheckResult {
    double max_rel_error = 0.0;
    std::size_t checked_parameters = 0;
};

// Central finite differences over every trainable scalar of the batch
// objective that training optimizes. Relative error uses the larger of the
// two gradients with a 1e-3 floor.
GradientCheckResult gradient_check(const AspectModelParams& params,
                                   const std::vector<BatchSegment>& in_domain,
                                   const std::vector<BatchSegment>& all_domain,
                                   const EmbeddingTable& table, double epsilon = 1e-5);

void save_aspect_model(const AspectModelParams& params, const std::string& path);
AspectModelParams load_aspect_model(const std::string& path);
Checkpoint aspect_model_to_checkpoint(const AspectModelParams& params);
AspectModelParams aspect_model_from_checkpoint(const Checkpoint& ckpt);

}  // namespace opsum
