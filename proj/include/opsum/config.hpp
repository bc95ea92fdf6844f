#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace opsum {

// Flat key-value pipeline configuration with dotted section keys.
// Unknown keys are rejected; '#' starts a comment.
struct PipelineConfig {
    std::uint64_t seed = 1;
    std::string out_dir = "out";

    std::string corpus_reviews;
    std::string corpus_domain;
    std::string corpus_stopwords;  // empty -> bundled list
    std::size_t corpus_min_count = 2;
    std::vector<std::pair<std::string, std::string>> out_of_domain;  // (domain, path)
    std::string corpus_annotations;

    std::vector<std::string> aspect_names;
    std::string general_aspect = "general";

    std::string embeddings_path;

    std::string seeds_path;
    std::size_t seeds_count = 30;

    std::string aspect_variant = "mate";
    std::size_t aspect_count = 0;  // abae only; defaults to |aspect_names|
    std::size_t aspect_negatives = 20;
    double aspect_lambda = 10.0;
    double aspect_learning_rate = 1e-4;
    std::size_t aspect_batch_size = 50;
    std::size_t aspect_epochs = 10;
    std::string aspect_checkpoint;  // default <out_dir>/aspect.ckpt

    std::size_t mil_classes = 5;
    std::vector<std::size_t> mil_windows = {3, 4, 5};
    std::size_t mil_feature_maps = 100;
    std::size_t mil_attention_hidden = 100;
    double mil_learning_rate = 1e-4;
    std::size_t mil_batch_size = 50;
    std::size_t mil_epochs = 10;
    std::string mil_checkpoint;  // default <out_dir>/mil.ckpt

    std::string polarity_backend = "mil";  // mil | lexicon

    std::string summary_system = "full";  // full | no-redundancy | random | lead
    std::size_t summary_budget = 100;
    double summary_threshold = 0.5;

    std::string eval_predictions;  // default <out_dir>/opinions.jsonl
    std::string eval_summaries;    // default <out_dir>/summaries.jsonl
    bool eval_aspects = true;
    bool eval_salience = true;
    bool eval_rouge = true;
    bool eval_interannotator = false;

    std::string aspect_checkpoint_path() const {
        return aspect_checkpoint.empty() ? out_dir + "/aspect.ckpt" : aspect_checkpoint;
    }
    std::string mil_checkpoint_path() const {
        return mil_checkpoint.empty() ? out_dir + "/mil.ckpt" : mil_checkpoint;
    }
    std::string predictions_path() const {
        return eval_predictions.empty() ? out_dir + "/opinions.jsonl" : eval_predictions;
    }
    std::string summaries_path() const {
        return eval_summaries.empty() ? out_dir + "/summaries.jsonl" : eval_summaries;
    }
};

PipelineConfig load_config(const std::string& path);
PipelineConfig parse_config(const std::string& text);

}  // namespace opsum
