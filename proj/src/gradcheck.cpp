#include <algorithm>
#include <cmath>
#include <ostream>

#include "opsum/aspect_model.hpp"
#include "opsum/errors.hpp"
#include "opsum/pipeline.hpp"
#include "opsum/polarity.hpp"
#include "opsum/rng.hpp"

namespace opsum {

namespace {

constexpr double kSmoothnessMargin = 1e-3;

EmbeddingTable random_table(Rng& rng, std::size_t dim, std::size_t words) {
    EmbeddingTable table(dim);
    Vec v(dim);
    for (std::size_t w = 0; w < words; ++w) {
        for (double& x : v) x = rng.uniform(-1.0, 1.0);
        table.insert("w" + std::to_string(w), v);
    }
    return table;
}

std::vector<std::string> random_tokens(Rng& rng, std::size_t words, std::size_t max_len) {
    std::size_t len = 1 + rng.next_below(max_len);
    std::vector<std::string> tokens;
    for (std::size_t i = 0; i < len; ++i)
        tokens.push_back("w" + std::to_string(rng.next_below(words)));
    return tokens;
}

SeedSet random_seed_set(Rng& rng, std::size_t k, std::size_t l, std::size_t words) {
    SeedSet seeds;
    for (std::size_t a = 0; a < k; ++a) {
        std::string name = "aspect_" + std::to_string(a);
        seeds.aspect_names.push_back(name);
        std::vector<std::size_t> pool(words);
        for (std::size_t i = 0; i < words; ++i) pool[i] = i;
        rng.shuffle(pool);
        Vec weights(l);
        double sum = 0.0;
        for (double& w : weights) {
            w = 0.1 + rng.next_double();
            sum += w;
        }
        std::vector<std::pair<std::string, double>> entries;
        for (std::size_t j = 0; j < l; ++j)
            entries.emplace_back("w" + std::to_string(pool[j]), weights[j] / sum);
        seeds.seeds[name] = std::move(entries);
    }
    return seeds;
}

// hinge terms must sit away from the kink for finite differences to agree
bool aspect_instance_smooth(const AspectModelParams& params, const EmbeddingTable& table,
                            const std::vector<BatchSegment>& in_domain) {
    const Mat aspect_mat = aspect_matrix(params);
    for (const BatchSegment& b : in_domain) {
        auto enc = encode_segment(b.tokens, table, params.attention);
        if (!enc) return false;
        Vec p = predict_aspects(enc->vector, params.classifier_weight, params.classifier_bias);
        Vec r = reconstruct(p, aspect_mat);
        const double rv = dot(r, enc->vector);
        for (const Vec& neg : b.negatives)
            if (std::abs(1.0 - rv + dot(r, neg)) < kSmoothnessMargin) return false;
    }
    return true;
}

double aspect_trial(std::uint64_t trial_seed) {
    for (std::uint64_t attempt = 0;; ++attempt) {
        Rng rng(trial_seed * 1000 + attempt);
        const std::size_t dim = 2 + rng.next_below(7);       // <= 8
        const std::size_t k = 2 + rng.next_below(2);         // <= 3
        const std::size_t l = 1 + rng.next_below(3);         // <= 3
        const std::size_t k_n = 1 + rng.next_below(3);       // <= 3
        const std::size_t words = 8 + rng.next_below(5);
        const AspectVariant variant = static_cast<AspectVariant>(rng.next_below(4));

        EmbeddingTable table = random_table(rng, dim, words);
        SeedSet seeds = random_seed_set(rng, k, l, words);

        AspectModelParams params;
        params.config.variant = variant;
        params.config.aspect_count = k;
        params.config.dim = dim;
        params.config.multitask_weight =
            variant == AspectVariant::mate_mt ? (rng.next_below(2) ? 10.0 : 0.5) : 0.0;
        for (std::size_t a = 0; a < k; ++a)
            params.aspect_names.push_back("aspect_" + std::to_string(a));
        params.attention = Mat(dim, dim);
        for (double& x : params.attention.data) x = rng.uniform(-0.6, 0.6);
        params.classifier_weight = Mat(k, dim);
        for (double& x : params.classifier_weight.data) x = rng.uniform(-0.6, 0.6);
        params.classifier_bias.resize(k);
        for (double& x : params.classifier_bias) x = rng.uniform(-0.3, 0.3);
        if (variant == AspectVariant::abae || variant == AspectVariant::abae_init) {
            params.aspect_embeddings = Mat(k, dim);
            for (double& x : params.aspect_embeddings.data) x = rng.uniform(-1.0, 1.0);
        } else {
            for (std::size_t a = 0; a < k; ++a) {
                Mat m(l, dim);
                Vec z(l);
                const auto& entries = seeds.seeds.at(params.aspect_names[a]);
                for (std::size_t j = 0; j < l; ++j) {
                    auto v = *table.lookup(entries[j].first);
                    std::copy(v.begin(), v.end(), m.row(j).begin());
                    z[j] = entries[j].second;
                }
                params.seed_matrices.push_back(std::move(m));
                params.seed_weights.push_back(std::move(z));
            }
        }
        std::vector<BatchSegment> all_domain;
        if (variant == AspectVariant::mate_mt) {
            params.domain_names = {"d0", "d1"};
            params.domain_weight = Mat(2, dim);
            for (double& x : params.domain_weight.data) x = rng.uniform(-0.6, 0.6);
            params.domain_bias.resize(2);
            for (double& x : params.domain_bias) x = rng.uniform(-0.3, 0.3);
            const std::size_t extra = 1 + rng.next_below(3);
            for (std::size_t i = 0; i < extra; ++i) {
                BatchSegment b;
                b.tokens = random_tokens(rng, words, 4);
                b.domain_index = rng.next_below(2);
                all_domain.push_back(std::move(b));
            }
        }

        std::vector<BatchSegment> in_domain;
        const std::size_t batch = 1 + rng.next_below(4);  // <= 5 with negatives below
        for (std::size_t i = 0; i < batch; ++i) {
            BatchSegment b;
            b.tokens = random_tokens(rng, words, 4);
            for (std::size_t j = 0; j < k_n; ++j) {
                auto neg_tokens = random_tokens(rng, words, 4);
                auto avg = average_vector(neg_tokens, table);
                b.negatives.push_back(*avg);
            }
            b.domain_index = 0;
            in_domain.push_back(std::move(b));
        }

        if (!aspect_instance_smooth(params, table, in_domain)) continue;
        return gradient_check(params, in_domain, all_domain, table).max_rel_error;
    }
}

// pooling maxima must be clear of ties
bool mil_instance_smooth(const MilParams& params, const EmbeddingTable& table,
                         const std::vector<Review>& batch) {
    const std::size_t dim = table.dim();
    const std::size_t max_window =
        *std::max_element(params.config.windows.begin(), params.config.windows.end());
    for (const Review& r : batch) {
        for (const Segment& s : r.segments) {
            std::vector<Vec> embedded;
            for (const std::string& t : s.tokens)
                if (auto v = table.lookup(t)) embedded.emplace_back(v->begin(), v->end());
            if (embedded.empty()) continue;
            while (embedded.size() < max_window) embedded.emplace_back(dim, 0.0);
            for (std::size_t wi = 0; wi < params.config.windows.size(); ++wi) {
                const std::size_t width = params.config.windows[wi];
                const std::size_t positions = embedded.size() - width + 1;
                for (std::size_t f = 0; f < params.config.feature_maps; ++f) {
                    double best = -1e300, second = -1e300;
                    for (std::size_t t = 0; t < positions; ++t) {
                        double o = params.filter_bias[wi][f];
                        for (std::size_t j = 0; j < width; ++j)
                            o += dot(params.filters[wi].row(f).subspan(j * dim, dim),
                                     embedded[t + j]);
                        if (o > best) {
                            second = best;
                            best = o;
                        } else if (o > second) {
                            second = o;
                        }
                    }
                    if (positions > 1 && best - second < kSmoothnessMargin) return false;
                }
            }
        }
    }
    return true;
}

double mil_trial(std::uint64_t trial_seed) {
    for (std::uint64_t attempt = 0;; ++attempt) {
        Rng rng(trial_seed * 1000 + attempt);
        const std::size_t dim = 2 + rng.next_below(5);
        const std::size_t words = 8 + rng.next_below(5);
        EmbeddingTable table = random_table(rng, dim, words);

        MilConfig config;
        config.classes = 2 + rng.next_below(2);
        config.attention_hidden = 2 + rng.next_below(3);
        // at most two filters in total
        if (rng.next_below(2)) {
            config.windows = {1 + rng.next_below(2), 2 + rng.next_below(2)};
            if (config.windows[0] == config.windows[1]) config.windows[1] += 1;
            config.feature_maps = 1;
        } else {
            config.windows = {1 + rng.next_below(3)};
            config.feature_maps = 2;
        }
        config.seed = rng.next_u64();

        // library init, widened so softmaxes and gates sit away from uniform
        MilParams params = initialize_mil_params(config, dim);
        Rng widen(trial_seed * 7919 + attempt);
        for (Mat* m : {&params.segment_weight, &params.attention_weight})
            for (double& x : m->data) x = widen.uniform(-0.6, 0.6);
        for (Mat& f : params.filters)
            for (double& x : f.data) x = widen.uniform(-0.6, 0.6);
        for (Vec& b : params.filter_bias)
            for (double& x : b) x = widen.uniform(-0.3, 0.3);
        for (double& x : params.attention_context) x = widen.uniform(-0.6, 0.6);
        for (GruCell* g : {&params.forward_gru, &params.backward_gru})
            for (Mat* m : {&g->w_update, &g->u_update, &g->w_reset, &g->u_reset, &g->w_cand,
                           &g->u_cand})
                for (double& x : m->data) x = widen.uniform(-0.6, 0.6);

        std::vector<Review> batch;
        const std::size_t reviews = 1 + rng.next_below(3);
        for (std::size_t i = 0; i < reviews; ++i) {
            Review r;
            r.review_id = "r" + std::to_string(i);
            r.product_id = "p";
            r.rating = 1 + static_cast<int>(rng.next_below(config.classes));
            const std::size_t segments = 1 + rng.next_below(3);
            for (std::size_t j = 0; j < segments; ++j) {
                Segment s;
                s.segment_id = "s" + std::to_string(i) + "_" + std::to_string(j);
                s.review_id = r.review_id;
                s.tokens = random_tokens(rng, words, 4);
                r.segments.push_back(std::move(s));
            }
            batch.push_back(std::move(r));
        }

        if (!mil_instance_smooth(params, table, batch)) continue;
        return mil_gradient_check(params, batch, table).max_rel_error;
    }
}

}  // namespace

RandomCheckSummary run_random_gradient_checks(std::uint64_t seed, std::size_t trials,
                                              std::ostream* log) {
    RandomCheckSummary summary;
    // 70/30 split between the autoencoder family and the MIL network
    const std::size_t mil_trials = std::max<std::size_t>(1, (trials * 3) / 10);
    const std::size_t aspect_trials = trials - mil_trials;

    for (std::size_t t = 0; t < aspect_trials; ++t) {
        double err = aspect_trial(seed + t + 1);
        summary.aspect_max_rel_error = std::max(summary.aspect_max_rel_error, err);
        ++summary.aspect_trials;
    }
    for (std::size_t t = 0; t < mil_trials; ++t) {
        double err = mil_trial(seed + 100000 + t + 1);
        summary.mil_max_rel_error = std::max(summary.mil_max_rel_error, err);
        ++summary.mil_trials;
    }
    if (log)
        *log << "gradient check: " << summary.aspect_trials << " aspect trials (max rel err "
             << summary.aspect_max_rel_error << "), " << summary.mil_trials
             << " MIL trials (max rel err " << summary.mil_max_rel_error << ")\n";
    return summary;
}

}  // namespace opsum
