#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace opsum {

using StopwordSet = std::unordered_set<std::string>;

// One review segment (clause-level unit). `text` is kept verbatim for
// summary output; `tokens` is the normalized form used by the models and
// may be empty after stopword filtering.
struct Segment {
    std::string segment_id;
    std::string text;
    std::vector<std::string> tokens;
    std::string review_id;
};

struct Review {
    std::string review_id;
    std::string product_id;
    int rating = 0;  // 1..5
    std::vector<Segment> segments;
};

struct Corpus {
    std::string domain_id;
    std::vector<Review> reviews;
    // product_id -> indices into `reviews`, in file order
    std::map<std::string, std::vector<std::size_t>> products;

    std::size_t segment_count() const;
    const Segment* find_segment(const std::string& segment_id) const;
    // refreshes `products` and the segment lookup; call after mutating reviews
    void rebuild_index();

private:
    // segment_id -> (review index, segment index)
    std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> segment_index_;
};

struct AspectAnnotation {
    std::string segment_id;
    std::set<std::string> aspects;
};

struct SalienceAnnotation {
    std::string segment_id;
    std::map<std::string, int> labels;  // annotator_id -> 0/1
};

struct GoldSummary {
    std::string product_id;
    std::string annotator_id;
    std::vector<std::string> summary_segment_ids;
};

struct AnnotationSet {
    std::vector<AspectAnnotation> aspects;
    std::vector<SalienceAnnotation> salience;
    std::vector<GoldSummary> summaries;
    std::vector<std::string> warnings;
};

class Vocabulary {
public:
    // token ids are dense in [0, size()) and assigned in lexicographic order
    std::optional<std::size_t> id(const std::string& token) const;
    bool contains(const std::string& token) const { return id(token).has_value(); }
    std::size_t size() const { return id_to_token_.size(); }
    const std::string& token(std::size_t id) const { return id_to_token_[id]; }
    std::size_t document_frequency(const std::string& token) const;
    std::size_t total_segments() const { return total_segments_; }
    const std::vector<std::string>& tokens() const { return id_to_token_; }

    friend Vocabulary build_vocabulary(const Corpus& corpus, std::size_t min_count);

private:
    std::unordered_map<std::string, std::size_t> token_to_id_;
    std::vector<std::string> id_to_token_;
    std::vector<std::size_t> df_;
    std::size_t total_segments_ = 0;
};

// Lowercases, strips punctuation (non-alphanumeric ASCII becomes a token
// break; bytes >= 0x80 pass through), and drops stopwords. Idempotent.
std::vector<std::string> normalize_tokens(const std::string& text, const StopwordSet& stopwords);

const StopwordSet& default_stopwords();
StopwordSet load_stopwords(const std::string& path);

// Reads one JSON review record per line. Segments are tokenized with
// normalize_tokens unless the record supplies a `tokens` field, in which
// case those tokens are lowercased and stopword-filtered as-is.
Corpus load_corpus(const std::string& path, const std::string& domain_id,
                   const StopwordSet& stopwords = default_stopwords());

void save_corpus(const Corpus& corpus, const std::string& path);

// min_count 0 is treated as 1; document frequency counts segments.
Vocabulary build_vocabulary(const Corpus& corpus, std::size_t min_count);

// Annotation records are JSON lines discriminated by "kind". `inventory`
// is the domain's fixed aspect name list; aspect records naming anything
// else are rejected. Over-budget gold summaries produce a warning entry.
AnnotationSet load_annotations(const std::string& path, const Corpus& corpus,
                               const std::vector<std::string>& inventory);

// Whitespace word count of raw (unnormalized) text.
std::size_t word_count(const std::string& text);

}  // namespace opsum
