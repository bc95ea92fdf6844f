#include "opsum/aspect_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "opsum/errors.hpp"
#include "opsum/rng.hpp"

namespace opsum {

namespace {

struct TrainSegment {
    std::vector<std::span<const double>> tokens;
    Vec plain_average;
};

std::optional<TrainSegment> make_train_segment(const std::vector<std::string>& tokens,
                                               const EmbeddingTable& table) {
    TrainSegment seg;
    for (const std::string& t : tokens)
        if (auto v = table.lookup(t)) seg.tokens.push_back(*v);
    if (seg.tokens.empty()) return std::nullopt;
    seg.plain_average.assign(table.dim(), 0.0);
    for (auto x : seg.tokens) axpy(1.0, x, seg.plain_average);
    for (double& x : seg.plain_average) x /= static_cast<double>(seg.tokens.size());
    return seg;
}

struct Grads {
    Mat attention;
    Mat classifier_weight;
    Vec classifier_bias;
    Mat domain_weight;
    Vec domain_bias;
    Mat aspect_embeddings;

    explicit Grads(const AspectModelParams& p)
        : attention(p.attention.rows, p.attention.cols),
          classifier_weight(p.classifier_weight.rows, p.classifier_weight.cols),
          classifier_bias(p.classifier_bias.size(), 0.0),
          domain_weight(p.domain_weight.rows, p.domain_weight.cols),
          domain_bias(p.domain_bias.size(), 0.0),
          aspect_embeddings(p.aspect_embeddings.rows, p.aspect_embeddings.cols) {}

    void zero() {
        auto clear = [](Vec& v) { std::fill(v.begin(), v.end(), 0.0); };
        clear(attention.data);
        clear(classifier_weight.data);
        clear(classifier_bias);
        clear(domain_weight.data);
        clear(domain_bias);
        clear(aspect_embeddings.data);
    }
};

// Forward pass and gradient accumulation for one segment. The hinge head
// runs when `negatives` is non-null; the domain head when lambda != 0 and
// `domain_head` is set. Returns {hinge loss, raw domain NLL}.
std::pair<double, double> accumulate_example(const TrainSegment& seg,
                                             const std::vector<const Vec*>* negatives,
                                             bool domain_head, std::size_t domain_label,
                                             double lambda, const AspectModelParams& params,
                                             const Mat& aspect_mat, Grads* grads) {
    const std::size_t n = seg.tokens.size();
    const std::size_t dim = params.attention.rows;

    // u_i = x_i' (M a), c = softmax(u), v = sum c_i x_i
    Vec ma = matvec(params.attention, seg.plain_average);
    Vec u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = dot(seg.tokens[i], ma);
    Vec c = softmax(u);
    Vec v(dim, 0.0);
    for (std::size_t i = 0; i < n; ++i) axpy(c[i], seg.tokens[i], v);

    Vec dv(dim, 0.0);
    double hinge = 0.0;
    double nll = 0.0;

    if (negatives) {
        Vec s = matvec(params.classifier_weight, v);
        axpy(1.0, params.classifier_bias, s);
        Vec p = softmax(s);
        Vec r = matvec_t(aspect_mat, p);

        const double rv = dot(r, v);
        Vec dr(dim, 0.0);
        std::size_t active = 0;
        for (const Vec* neg : *negatives) {
            double margin = 1.0 - rv + dot(r, *neg);
            if (margin > 0.0) {
                hinge += margin;
                ++active;
                axpy(1.0, *neg, dr);
            }
        }
        if (active > 0) {
            axpy(-static_cast<double>(active), v, dr);  // dJ/dr = sum (n_j - v)
            axpy(-static_cast<double>(active), r, dv);  // direct -r.v term
        }
        if (grads) {
            Vec dp = matvec(aspect_mat, dr);
            if (params.aspect_matrix_trainable())
                add_outer(grads->aspect_embeddings, p, dr);
            Vec ds = softmax_backward(p, dp);
            add_outer(grads->classifier_weight, ds, v);
            axpy(1.0, ds, grads->classifier_bias);
            Vec back = matvec_t(params.classifier_weight, ds);
            axpy(1.0, back, dv);
        }
    }

    if (domain_head && lambda != 0.0) {
        Vec z = matvec(params.domain_weight, v);
        axpy(1.0, params.domain_bias, z);
        Vec q = softmax(z);
        nll = -std::log(std::max(q[domain_label], 1e-300));
        if (grads) {
            Vec dz = q;  // lambda * (q - onehot(label))
            dz[domain_label] -= 1.0;
            for (double& x : dz) x *= lambda;
            add_outer(grads->domain_weight, dz, v);
            axpy(1.0, dz, grads->domain_bias);
            Vec back = matvec_t(params.domain_weight, dz);
            axpy(1.0, back, dv);
        }
    }

    if (grads) {
        // back through the attention encoder
        Vec dc(n);
        for (std::size_t i = 0; i < n; ++i) dc[i] = dot(seg.tokens[i], dv);
        Vec du = softmax_backward(c, dc);
        Vec w(dim, 0.0);
        for (std::size_t i = 0; i < n; ++i) axpy(du[i], seg.tokens[i], w);
        add_outer(grads->attention, w, seg.plain_average);
    }
    return {hinge, nll};
}

std::vector<std::pair<std::span<double>, std::span<const double>>> trainable_pairs(
    AspectModelParams& p, Grads& g) {
    std::vector<std::pair<std::span<double>, std::span<const double>>> out;
    out.emplace_back(std::span<double>(p.attention.data), std::span<const double>(g.attention.data));
    out.emplace_back(std::span<double>(p.classifier_weight.data),
                     std::span<const double>(g.classifier_weight.data));
    out.emplace_back(std::span<double>(p.classifier_bias), std::span<const double>(g.classifier_bias));
    if (p.aspect_matrix_trainable())
        out.emplace_back(std::span<double>(p.aspect_embeddings.data),
                         std::span<const double>(g.aspect_embeddings.data));
    if (p.multitask()) {
        out.emplace_back(std::span<double>(p.domain_weight.data),
                         std::span<const double>(g.domain_weight.data));
        out.emplace_back(std::span<double>(p.domain_bias), std::span<const double>(g.domain_bias));
    }
    return out;
}

}  // namespace

AspectVariant aspect_variant_from_string(const std::string& name) {
    if (name == "abae") return AspectVariant::abae;
    if (name == "abae_init") return AspectVariant::abae_init;
    if (name == "mate") return AspectVariant::mate;
    if (name == "mate_mt") return AspectVariant::mate_mt;
    throw ConfigError("unknown aspect model variant: " + name);
}

std::string to_string(AspectVariant v) {
    switch (v) {
        case AspectVariant::abae: return "abae";
        case AspectVariant::abae_init: return "abae_init";
        case AspectVariant::mate: return "mate";
        case AspectVariant::mate_mt: return "mate_mt";
    }
    return "?";
}

std::optional<SegmentEncoding> encode_segment(const std::vector<std::string>& tokens,
                                              const EmbeddingTable& table,
                                              const Mat& attention_matrix) {
    auto seg = make_train_segment(tokens, table);
    if (!seg) return std::nullopt;
    Vec ma = matvec(attention_matrix, seg->plain_average);
    Vec u(seg->tokens.size());
    for (std::size_t i = 0; i < seg->tokens.size(); ++i) u[i] = dot(seg->tokens[i], ma);
    SegmentEncoding enc;
    enc.attention = softmax(u);
    enc.vector.assign(table.dim(), 0.0);
    for (std::size_t i = 0; i < seg->tokens.size(); ++i)
        axpy(enc.attention[i], seg->tokens[i], enc.vector);
    return enc;
}

Vec predict_aspects(const Vec& segment_vector, const Mat& classifier_weight,
                    const Vec& classifier_bias) {
    Vec s = matvec(classifier_weight, segment_vector);
    axpy(1.0, classifier_bias, s);
    return softmax(s);
}

Mat aspect_matrix(const AspectModelParams& params) {
    if (!params.uses_seed_matrices()) return params.aspect_embeddings;
    const std::size_t k = params.seed_matrices.size();
    const std::size_t dim = params.seed_matrices.empty() ? 0 : params.seed_matrices[0].cols;
    Mat a(k, dim);
    for (std::size_t i = 0; i < k; ++i) {
        Vec row = matvec_t(params.seed_matrices[i], params.seed_weights[i]);
        std::copy(row.begin(), row.end(), a.row(i).begin());
    }
    return a;
}

Vec reconstruct(const Vec& aspect_probs, const Mat& aspect_mat) {
    return matvec_t(aspect_mat, aspect_probs);
}

double reconstruction_loss(const Vec& segment_vector, const Vec& reconstruction,
                           const std::vector<Vec>& negatives) {
    const double rv = dot(reconstruction, segment_vector);
    double loss = 0.0;
    for (const Vec& neg : negatives)
        loss += std::max(0.0, 1.0 - rv + dot(reconstruction, neg));
    return loss;
}

std::optional<AspectPrediction> predict(const AspectModelParams& params,
                                        const EmbeddingTable& table,
                                        const std::vector<std::string>& tokens) {
    auto enc = encode_segment(tokens, table, params.attention);
    if (!enc) return std::nullopt;
    AspectPrediction pred;
    pred.probabilities =
        predict_aspects(enc->vector, params.classifier_weight, params.classifier_bias);
    pred.attention = std::move(enc->attention);
    return pred;
}

double multitask_loss(const std::vector<BatchSegment>& in_domain,
                      const std::vector<BatchSegment>& all_domain,
                      const AspectModelParams& params, const EmbeddingTable& table,
                      double lambda) {
    if (lambda != 0.0 && params.domain_weight.rows < 2)
        throw ConfigError("multitask loss with lambda > 0 requires at least two domains");
    const Mat aspect_mat = aspect_matrix(params);
    const bool domain_head = lambda != 0.0;
    double total = 0.0;
    for (const BatchSegment& b : in_domain) {
        auto seg = make_train_segment(b.tokens, table);
        if (!seg) continue;
        std::vector<const Vec*> negs;
        negs.reserve(b.negatives.size());
        for (const Vec& n : b.negatives) negs.push_back(&n);
        auto [hinge, nll] = accumulate_example(*seg, &negs, domain_head, b.domain_index, lambda,
                                               params, aspect_mat, nullptr);
        total += hinge + lambda * nll;
    }
    for (const BatchSegment& b : all_domain) {
        auto seg = make_train_segment(b.tokens, table);
        if (!seg) continue;
        auto [hinge, nll] = accumulate_example(*seg, nullptr, domain_head, b.domain_index, lambda,
                                               params, aspect_mat, nullptr);
        total += lambda * nll;
    }
    return total;
}

namespace {

AspectModelParams initialize_params(const AspectModelConfig& config,
                                    const EmbeddingTable& table, const SeedSet* seeds,
                                    const Vocabulary* vocabulary,
                                    const std::vector<std::string>& domain_names) {
    AspectModelParams p;
    p.config = config;
    p.config.dim = table.dim();
    const std::size_t dim = table.dim();

    if (config.variant == AspectVariant::abae) {
        if (p.config.aspect_count == 0)
            throw ConfigError("abae requires aspect_count");
        if (!vocabulary) throw ConfigError("abae requires a vocabulary for k-means initialization");
        for (std::size_t i = 0; i < p.config.aspect_count; ++i)
            p.aspect_names.push_back("aspect_" + std::to_string(i));
    } else {
        if (!seeds) throw ConfigError(to_string(config.variant) + " requires a seed set");
        seeds->validate(table);
        p.aspect_names = seeds->aspect_names;
        p.config.aspect_count = seeds->aspect_names.size();
        p.config.seeds_per_aspect = seeds->seeds_per_aspect();
    }
    const std::size_t k = p.config.aspect_count;

    p.attention = Mat::identity(dim);
    Rng init_rng(config.seed + seed_offset::kAspectInit);
    p.classifier_weight = Mat(k, dim);
    for (double& x : p.classifier_weight.data) x = init_rng.uniform(-0.05, 0.05);
    p.classifier_bias.assign(k, 0.0);

    switch (config.variant) {
        case AspectVariant::abae: {
            std::vector<Vec> points;
            for (const std::string& w : vocabulary->tokens())
                if (auto v = table.lookup(w)) points.emplace_back(v->begin(), v->end());
            Centroids centers =
                kmeans(points, k, 100, config.seed + seed_offset::kAspectKmeans);
            p.aspect_embeddings = Mat(k, dim);
            for (std::size_t i = 0; i < k; ++i)
                std::copy(centers[i].begin(), centers[i].end(), p.aspect_embeddings.row(i).begin());
            break;
        }
        case AspectVariant::abae_init: {
            p.aspect_embeddings = Mat(k, dim);
            for (std::size_t i = 0; i < k; ++i) {
                const auto& entries = seeds->seeds.at(p.aspect_names[i]);
                Vec centroid(dim, 0.0);
                for (const auto& [word, _] : entries) axpy(1.0, *table.lookup(word), centroid);
                for (double& x : centroid) x /= static_cast<double>(entries.size());
                std::copy(centroid.begin(), centroid.end(), p.aspect_embeddings.row(i).begin());
            }
            break;
        }
        case AspectVariant::mate:
        case AspectVariant::mate_mt: {
            for (std::size_t i = 0; i < k; ++i) {
                const auto& entries = seeds->seeds.at(p.aspect_names[i]);
                Mat m(entries.size(), dim);
                Vec z(entries.size());
                for (std::size_t j = 0; j < entries.size(); ++j) {
                    auto v = *table.lookup(entries[j].first);
                    std::copy(v.begin(), v.end(), m.row(j).begin());
                    z[j] = entries[j].second;
                }
                p.seed_matrices.push_back(std::move(m));
                p.seed_weights.push_back(std::move(z));
            }
            break;
        }
    }

    if (config.variant == AspectVariant::mate_mt) {
        p.domain_names = domain_names;
        const std::size_t d_count = domain_names.size();
        if (config.multitask_weight > 0.0 && d_count < 2)
            throw ConfigError("mate_mt with lambda > 0 requires out-of-domain corpora");
        Rng dom_rng(config.seed + seed_offset::kAspectDomainInit);
        p.domain_weight = Mat(d_count, dim);
        for (double& x : p.domain_weight.data) x = dom_rng.uniform(-0.05, 0.05);
        p.domain_bias.assign(d_count, 0.0);
    }
    return p;
}

}  // namespace

AspectModelParams train_aspect_model(const Corpus& in_domain,
                                     const std::vector<Corpus>& out_of_domain,
                                     const AspectModelConfig& config,
                                     const EmbeddingTable& table, const SeedSet* seeds,
                                     const Vocabulary* vocabulary, AspectTrainStats* stats) {
    if (in_domain.reviews.empty()) throw ValidationError("training corpus is empty");
    if (config.negative_samples < 1) throw ConfigError("negative_samples must be >= 1");
    if (config.batch_size < 1) throw ConfigError("batch_size must be >= 1");

    std::vector<std::string> domain_names{in_domain.domain_id};
    for (const Corpus& c : out_of_domain) {
        if (std::find(domain_names.begin(), domain_names.end(), c.domain_id) != domain_names.end())
            throw ConfigError("duplicate domain id: " + c.domain_id);
        domain_names.push_back(c.domain_id);
    }

    AspectModelParams params = initialize_params(config, table, seeds, vocabulary, domain_names);
    const double lambda = params.multitask() ? config.multitask_weight : 0.0;

    AspectTrainStats local_stats;
    AspectTrainStats& st = stats ? *stats : local_stats;

    auto collect = [&](const Corpus& corpus) {
        std::vector<TrainSegment> segs;
        for (const Review& r : corpus.reviews)
            for (const Segment& s : r.segments) {
                if (auto t = make_train_segment(s.tokens, table))
                    segs.push_back(std::move(*t));
                else
                    ++st.skipped_segments;
            }
        return segs;
    };
    std::vector<TrainSegment> trainables = collect(in_domain);
    if (trainables.empty())
        throw ValidationError("no trainable segments (all lack in-vocabulary tokens)");
    std::vector<std::vector<TrainSegment>> pools;
    if (params.multitask()) {
        pools.push_back({});  // placeholder; in-domain pool is `trainables`
        for (const Corpus& c : out_of_domain) {
            pools.push_back(collect(c));
            if (pools.back().empty())
                throw ValidationError("out-of-domain corpus '" + c.domain_id +
                                      "' has no trainable segments");
        }
    }
    const std::size_t domain_count = domain_names.size();

    const Mat fixed_aspect_mat =
        params.uses_seed_matrices() ? aspect_matrix(params) : Mat();

    Rng shuffle_rng(config.seed + seed_offset::kAspectShuffle);
    Rng negative_rng(config.seed + seed_offset::kAspectNegatives);
    Rng domain_rng(config.seed + seed_offset::kAspectDomainBatch);

    Adam adam(config.learning_rate);
    Grads grads(params);
    std::vector<Adam::State> adam_states(trainable_pairs(params, grads).size());

    std::vector<std::size_t> order(trainables.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double epoch_hinge = 0.0, epoch_nll = 0.0;
        std::size_t classified = 0;

        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t end = std::min(order.size(), start + config.batch_size);
            grads.zero();
            const Mat& aspect_mat =
                params.uses_seed_matrices() ? fixed_aspect_mat : params.aspect_embeddings;

            for (std::size_t b = start; b < end; ++b) {
                const TrainSegment& seg = trainables[order[b]];
                std::vector<const Vec*> negs;
                negs.reserve(config.negative_samples);
                for (std::size_t j = 0; j < config.negative_samples; ++j)
                    negs.push_back(&trainables[negative_rng.next_below(trainables.size())]
                                        .plain_average);
                auto [hinge, nll] = accumulate_example(seg, &negs, params.multitask() && lambda != 0.0,
                                                       0, lambda, params, aspect_mat, &grads);
                epoch_hinge += hinge;
                if (params.multitask() && lambda != 0.0) {
                    epoch_nll += nll;
                    ++classified;
                }
            }

            if (params.multitask() && lambda != 0.0) {
                // balanced classification-only batch across all domains
                for (std::size_t j = 0; j < end - start; ++j) {
                    const std::size_t d = j % domain_count;
                    const std::vector<TrainSegment>& pool = d == 0 ? trainables : pools[d];
                    const TrainSegment& seg = pool[domain_rng.next_below(pool.size())];
                    auto [hinge, nll] =
                        accumulate_example(seg, nullptr, true, d, lambda, params, aspect_mat, &grads);
                    epoch_nll += nll;
                    ++classified;
                }
            }

            auto pairs = trainable_pairs(params, grads);
            for (std::size_t i = 0; i < pairs.size(); ++i)
                adam.step(pairs[i].first, pairs[i].second, adam_states[i]);
        }

        st.epoch_reconstruction.push_back(epoch_hinge / static_cast<double>(trainables.size()));
        st.epoch_domain_nll.push_back(classified ? epoch_nll / static_cast<double>(classified)
                                                 : 0.0);
    }
    return params;
}

GradientCheckResult gradient_check(const AspectModelParams& params,
                                   const std::vector<BatchSegment>& in_domain,
                                   const std::vector<BatchSegment>& all_domain,
                                   const EmbeddingTable& table, double epsilon) {
    AspectModelParams work = params;
    const double lambda = work.multitask() ? work.config.multitask_weight : 0.0;

    Grads grads(work);
    grads.zero();
    {
        const Mat aspect_mat = aspect_matrix(work);
        for (const BatchSegment& b : in_domain) {
            auto seg = make_train_segment(b.tokens, table);
            if (!seg) continue;
            std::vector<const Vec*> negs;
            for (const Vec& n : b.negatives) negs.push_back(&n);
            accumulate_example(*seg, &negs, lambda != 0.0, b.domain_index, lambda, work,
                               aspect_mat, &grads);
        }
        for (const BatchSegment& b : all_domain) {
            auto seg = make_train_segment(b.tokens, table);
            if (!seg) continue;
            accumulate_example(*seg, nullptr, lambda != 0.0, b.domain_index, lambda, work,
                               aspect_mat, &grads);
        }
    }

    GradientCheckResult result;
    auto pairs = trainable_pairs(work, grads);
    for (auto& [theta, grad] : pairs) {
        for (std::size_t i = 0; i < theta.size(); ++i) {
            const double saved = theta[i];
            theta[i] = saved + epsilon;
            const double up = multitask_loss(in_domain, all_domain, work, table, lambda);
            theta[i] = saved - epsilon;
            const double down = multitask_loss(in_domain, all_domain, work, table, lambda);
            theta[i] = saved;
            const double numeric = (up - down) / (2.0 * epsilon);
            const double analytic = grad[i];
            const double rel = std::abs(analytic - numeric) /
                               std::max({std::abs(analytic), std::abs(numeric), 1e-3});
            result.max_rel_error = std::max(result.max_rel_error, rel);
            ++result.checked_parameters;
        }
    }
    return result;
}

Checkpoint aspect_model_to_checkpoint(const AspectModelParams& params) {
    Checkpoint c;
    c.kind = "aspect_model";
    c.strings["variant"] = to_string(params.config.variant);
    c.strings["seed"] = std::to_string(params.config.seed);
    c.scalars["aspect_count"] = static_cast<double>(params.config.aspect_count);
    c.scalars["dim"] = static_cast<double>(params.config.dim);
    c.scalars["seeds_per_aspect"] = static_cast<double>(params.config.seeds_per_aspect);
    c.scalars["negative_samples"] = static_cast<double>(params.config.negative_samples);
    c.scalars["multitask_weight"] = params.config.multitask_weight;
    c.scalars["learning_rate"] = params.config.learning_rate;
    c.scalars["batch_size"] = static_cast<double>(params.config.batch_size);
    c.scalars["epochs"] = static_cast<double>(params.config.epochs);
    c.string_lists["aspect_names"] = params.aspect_names;
    c.string_lists["domain_names"] = params.domain_names;

    c.add_tensor("attention", params.attention);
    c.add_tensor("classifier_weight", params.classifier_weight);
    c.add_tensor("classifier_bias", Mat::from_row(params.classifier_bias));
    if (params.multitask()) {
        c.add_tensor("domain_weight", params.domain_weight);
        c.add_tensor("domain_bias", Mat::from_row(params.domain_bias));
    }
    if (params.uses_seed_matrices()) {
        for (std::size_t i = 0; i < params.seed_matrices.size(); ++i) {
            c.add_tensor("seed_matrix_" + std::to_string(i), params.seed_matrices[i]);
            c.add_tensor("seed_weights_" + std::to_string(i),
                         Mat::from_row(params.seed_weights[i]));
        }
    } else {
        c.add_tensor("aspect_embeddings", params.aspect_embeddings);
    }
    return c;
}

AspectModelParams aspect_model_from_checkpoint(const Checkpoint& c) {
    if (c.kind != "aspect_model") throw ValidationError("checkpoint kind is not aspect_model");
    AspectModelParams p;
    p.config.variant = aspect_variant_from_string(c.strings.at("variant"));
    p.config.seed = std::stoull(c.strings.at("seed"));
    p.config.aspect_count = static_cast<std::size_t>(c.scalars.at("aspect_count"));
    p.config.dim = static_cast<std::size_t>(c.scalars.at("dim"));
    p.config.seeds_per_aspect = static_cast<std::size_t>(c.scalars.at("seeds_per_aspect"));
    p.config.negative_samples = static_cast<std::size_t>(c.scalars.at("negative_samples"));
    p.config.multitask_weight = c.scalars.at("multitask_weight");
    p.config.learning_rate = c.scalars.at("learning_rate");
    p.config.batch_size = static_cast<std::size_t>(c.scalars.at("batch_size"));
    p.config.epochs = static_cast<std::size_t>(c.scalars.at("epochs"));
    p.aspect_names = c.string_lists.at("aspect_names");
    p.domain_names = c.string_lists.at("domain_names");

    p.attention = c.tensor("attention");
    p.classifier_weight = c.tensor("classifier_weight");
    p.classifier_bias = c.tensor("classifier_bias").data;
    if (p.multitask()) {
        p.domain_weight = c.tensor("domain_weight");
        p.domain_bias = c.tensor("domain_bias").data;
    }
    if (p.uses_seed_matrices()) {
        for (std::size_t i = 0; i < p.config.aspect_count; ++i) {
            p.seed_matrices.push_back(c.tensor("seed_matrix_" + std::to_string(i)));
            p.seed_weights.push_back(c.tensor("seed_weights_" + std::to_string(i)).data);
        }
    } else {
        p.aspect_embeddings = c.tensor("aspect_embeddings");
    }
    return p;
}

void save_aspect_model(const AspectModelParams& params, const std::string& path) {
    save_checkpoint(aspect_model_to_checkpoint(params), path);
}

AspectModelParams load_aspect_model(const std::string& path) {
    return aspect_model_from_checkpoint(load_checkpoint(path));
}

}  // namespace opsum
