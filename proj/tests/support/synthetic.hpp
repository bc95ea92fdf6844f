#pragma once

// Two-domain synthetic review corpus with planted aspects and polarity.
//
// Domain "alpha" owns four aspects plus general; every aspect owns ten
// exclusive signal words whose embeddings cluster around an anchor
// direction. Later signal words are noisier and drift toward the next
// aspect's anchor while earlier ones are frequent and prototypical, so
// frequency-aware seed weighting has something real to win. Domain "beta"
// has its own signal vocabulary; filler words are shared across domains,
// which is what makes the domain-classification signal informative for
// attention. Positive/negative words occupy their own directions and drive
// the planted review ratings (5 / 1, neutral reviews get 3).

#include <cstdint>
#include <string>
#include <vector>

#include "opsum/corpus.hpp"
#include "opsum/embeddings.hpp"

namespace synthetic {

struct World {
    opsum::EmbeddingTable table;
    opsum::Corpus train_in;   // alpha, 2000 segments
    opsum::Corpus train_out;  // beta, 2000 segments
    opsum::Corpus eval_in;    // alpha, held-out labeled split

    std::vector<opsum::AspectAnnotation> dev_aspects;   // labeled subset of train_in
    std::vector<opsum::AspectAnnotation> eval_aspects;  // gold for eval_in
    std::vector<opsum::SalienceAnnotation> eval_salience;
    std::vector<std::string> aspect_names;  // general first
};

World make_world(std::uint64_t seed);

}  // namespace synthetic
