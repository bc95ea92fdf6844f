#include "opsum/polarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "opsum/errors.hpp"
#include "opsum/rng.hpp"

namespace opsum {

namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// token embeddings of one segment, zero-padded to the largest window width
struct PaddedSegment {
    std::vector<std::span<const double>> tokens;  // real tokens only
    std::size_t padded_length = 0;

    std::span<const double> token(std::size_t t, std::size_t dim, const Vec& zero) const {
        if (t < tokens.size()) return tokens[t];
        return {zero.data(), dim};
    }
};

std::optional<PaddedSegment> pad_segment(const std::vector<std::string>& tokens,
                                         const EmbeddingTable& table,
                                         std::size_t max_window) {
    PaddedSegment seg;
    for (const std::string& t : tokens)
        if (auto v = table.lookup(t)) seg.tokens.push_back(*v);
    if (seg.tokens.empty()) return std::nullopt;
    seg.padded_length = std::max(seg.tokens.size(), max_window);
    return seg;
}

struct CnnCache {
    std::vector<std::vector<std::size_t>> argmax;  // per window, per feature map
    Vec pre_tanh;                                  // pooled, concatenated
    Vec encoding;                                  // u = tanh(pre_tanh)
};

void cnn_forward(const PaddedSegment& seg, const MilParams& p, std::size_t dim, const Vec& zero,
                 CnnCache& cache) {
    const std::size_t n_windows = p.config.windows.size();
    const std::size_t f_maps = p.config.feature_maps;
    cache.argmax.assign(n_windows, std::vector<std::size_t>(f_maps, 0));
    cache.pre_tanh.assign(n_windows * f_maps, 0.0);
    for (std::size_t wi = 0; wi < n_windows; ++wi) {
        const std::size_t width = p.config.windows[wi];
        const std::size_t positions = seg.padded_length - width + 1;
        for (std::size_t f = 0; f < f_maps; ++f) {
            auto filter = p.filters[wi].row(f);
            double best = -std::numeric_limits<double>::infinity();
            std::size_t best_t = 0;
            for (std::size_t t = 0; t < positions; ++t) {
                double o = p.filter_bias[wi][f];
                for (std::size_t j = 0; j < width; ++j)
                    o += dot(filter.subspan(j * dim, dim), seg.token(t + j, dim, zero));
                if (o > best) {
                    best = o;
                    best_t = t;
                }
            }
            cache.argmax[wi][f] = best_t;
            cache.pre_tanh[wi * f_maps + f] = best;
        }
    }
    cache.encoding.resize(cache.pre_tanh.size());
    for (std::size_t i = 0; i < cache.pre_tanh.size(); ++i)
        cache.encoding[i] = std::tanh(cache.pre_tanh[i]);
}

struct GruCache {
    std::vector<Vec> update, reset, candidate, hidden;  // in processing order
};

void gru_forward(const GruCell& cell, const std::vector<const Vec*>& inputs, GruCache& cache) {
    const std::size_t hidden = cell.b_update.size();
    const std::size_t steps = inputs.size();
    cache.update.resize(steps);
    cache.reset.resize(steps);
    cache.candidate.resize(steps);
    cache.hidden.resize(steps);
    Vec prev(hidden, 0.0);
    for (std::size_t t = 0; t < steps; ++t) {
        const Vec& x = *inputs[t];
        Vec z = matvec(cell.w_update, x);
        axpy(1.0, matvec(cell.u_update, prev), z);
        axpy(1.0, cell.b_update, z);
        for (double& v : z) v = sigmoid(v);
        Vec r = matvec(cell.w_reset, x);
        axpy(1.0, matvec(cell.u_reset, prev), r);
        axpy(1.0, cell.b_reset, r);
        for (double& v : r) v = sigmoid(v);
        Vec rh(hidden);
        for (std::size_t i = 0; i < hidden; ++i) rh[i] = r[i] * prev[i];
        Vec c = matvec(cell.w_cand, x);
        axpy(1.0, matvec(cell.u_cand, rh), c);
        axpy(1.0, cell.b_cand, c);
        for (double& v : c) v = std::tanh(v);
        Vec h(hidden);
        for (std::size_t i = 0; i < hidden; ++i) h[i] = (1.0 - z[i]) * prev[i] + z[i] * c[i];
        cache.update[t] = std::move(z);
        cache.reset[t] = std::move(r);
        cache.candidate[t] = std::move(c);
        cache.hidden[t] = h;
        prev = std::move(h);
    }
}

struct GruGrads {
    Mat w_update, u_update;
    Vec b_update;
    Mat w_reset, u_reset;
    Vec b_reset;
    Mat w_cand, u_cand;
    Vec b_cand;

    explicit GruGrads(const GruCell& c)
        : w_update(c.w_update.rows, c.w_update.cols),
          u_update(c.u_update.rows, c.u_update.cols),
          b_update(c.b_update.size(), 0.0),
          w_reset(c.w_reset.rows, c.w_reset.cols),
          u_reset(c.u_reset.rows, c.u_reset.cols),
          b_reset(c.b_reset.size(), 0.0),
          w_cand(c.w_cand.rows, c.w_cand.cols),
          u_cand(c.u_cand.rows, c.u_cand.cols),
          b_cand(c.b_cand.size(), 0.0) {}
};

// dh_out[t] is the gradient arriving at hidden state t from outside the
// recurrence. Parameter gradients accumulate into `grads`; input gradients
// into dinputs (same processing order as the forward pass).
void gru_backward(const GruCell& cell, const std::vector<const Vec*>& inputs,
                  const GruCache& cache, const std::vector<Vec>& dh_out, GruGrads& grads,
                  std::vector<Vec>& dinputs) {
    const std::size_t hidden = cell.b_update.size();
    const std::size_t steps = inputs.size();
    Vec carry(hidden, 0.0);
    for (std::size_t t = steps; t-- > 0;) {
        const Vec& x = *inputs[t];
        const Vec& z = cache.update[t];
        const Vec& r = cache.reset[t];
        const Vec& c = cache.candidate[t];
        const Vec zero(hidden, 0.0);
        const Vec& prev = t == 0 ? zero : cache.hidden[t - 1];

        Vec dh(hidden);
        for (std::size_t i = 0; i < hidden; ++i) dh[i] = dh_out[t][i] + carry[i];

        Vec dz(hidden), dc(hidden), dprev(hidden);
        for (std::size_t i = 0; i < hidden; ++i) {
            dz[i] = dh[i] * (c[i] - prev[i]);
            dc[i] = dh[i] * z[i];
            dprev[i] = dh[i] * (1.0 - z[i]);
        }

        Vec dac(hidden);  // candidate pre-activation
        for (std::size_t i = 0; i < hidden; ++i) dac[i] = dc[i] * (1.0 - c[i] * c[i]);
        Vec rh(hidden);
        for (std::size_t i = 0; i < hidden; ++i) rh[i] = r[i] * prev[i];
        add_outer(grads.w_cand, dac, x);
        add_outer(grads.u_cand, dac, rh);
        axpy(1.0, dac, grads.b_cand);
        axpy(1.0, matvec_t(cell.w_cand, dac), dinputs[t]);
        Vec drh = matvec_t(cell.u_cand, dac);
        Vec dr(hidden);
        for (std::size_t i = 0; i < hidden; ++i) {
            dr[i] = drh[i] * prev[i];
            dprev[i] += drh[i] * r[i];
        }

        Vec dar(hidden);
        for (std::size_t i = 0; i < hidden; ++i) dar[i] = dr[i] * r[i] * (1.0 - r[i]);
        add_outer(grads.w_reset, dar, x);
        add_outer(grads.u_reset, dar, prev);
        axpy(1.0, dar, grads.b_reset);
        axpy(1.0, matvec_t(cell.w_reset, dar), dinputs[t]);
        axpy(1.0, matvec_t(cell.u_reset, dar), dprev);

        Vec daz(hidden);
        for (std::size_t i = 0; i < hidden; ++i) daz[i] = dz[i] * z[i] * (1.0 - z[i]);
        add_outer(grads.w_update, daz, x);
        add_outer(grads.u_update, daz, prev);
        axpy(1.0, daz, grads.b_update);
        axpy(1.0, matvec_t(cell.w_update, daz), dinputs[t]);
        axpy(1.0, matvec_t(cell.u_update, daz), dprev);

        carry = std::move(dprev);
    }
}

struct MilGrads {
    std::vector<Mat> filters;
    std::vector<Vec> filter_bias;
    Mat segment_weight;
    Vec segment_bias;
    GruGrads forward_gru, backward_gru;
    Mat attention_weight;
    Vec attention_bias;
    Vec attention_context;

    explicit MilGrads(const MilParams& p)
        : segment_weight(p.segment_weight.rows, p.segment_weight.cols),
          segment_bias(p.segment_bias.size(), 0.0),
          forward_gru(p.forward_gru),
          backward_gru(p.backward_gru),
          attention_weight(p.attention_weight.rows, p.attention_weight.cols),
          attention_bias(p.attention_bias.size(), 0.0),
          attention_context(p.attention_context.size(), 0.0) {
        for (const Mat& f : p.filters) filters.emplace_back(f.rows, f.cols);
        for (const Vec& b : p.filter_bias) filter_bias.emplace_back(b.size(), 0.0);
    }
};

struct ReviewCache {
    std::vector<PaddedSegment> segments;
    std::vector<CnnCache> cnn;
    std::vector<Vec> predictions;  // p_i per usable segment
    GruCache gru_forward, gru_backward;
    std::vector<Vec> states;        // summed bidirectional states
    std::vector<Vec> projected;     // g_t = tanh(Wa h_t + ba)
    Vec attention;                  // alpha
    Vec doc_probs;
    std::vector<const Vec*> inputs_fwd, inputs_bwd;
};

// Forward over a review's usable segments. Returns false when none are usable.
bool forward_review(const std::vector<const Segment*>& segments, const MilParams& p,
                    const EmbeddingTable& table, ReviewCache& cache,
                    std::size_t* skipped_segments = nullptr) {
    const std::size_t dim = table.dim();
    const std::size_t max_window =
        *std::max_element(p.config.windows.begin(), p.config.windows.end());
    static thread_local Vec zero;
    zero.assign(dim, 0.0);

    for (const Segment* s : segments) {
        auto padded = pad_segment(s->tokens, table, max_window);
        if (!padded) {
            if (skipped_segments) ++*skipped_segments;
            continue;
        }
        cache.segments.push_back(std::move(*padded));
    }
    if (cache.segments.empty()) return false;

    const std::size_t m = cache.segments.size();
    cache.cnn.resize(m);
    cache.predictions.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        cnn_forward(cache.segments[i], p, dim, zero, cache.cnn[i]);
        Vec s = matvec(p.segment_weight, cache.cnn[i].encoding);
        axpy(1.0, p.segment_bias, s);
        cache.predictions[i] = softmax(s);
    }

    cache.inputs_fwd.clear();
    cache.inputs_bwd.clear();
    for (std::size_t i = 0; i < m; ++i) cache.inputs_fwd.push_back(&cache.predictions[i]);
    for (std::size_t i = m; i-- > 0;) cache.inputs_bwd.push_back(&cache.predictions[i]);
    gru_forward(p.forward_gru, cache.inputs_fwd, cache.gru_forward);
    gru_forward(p.backward_gru, cache.inputs_bwd, cache.gru_backward);

    cache.states.resize(m);
    cache.projected.resize(m);
    Vec logits(m);
    for (std::size_t t = 0; t < m; ++t) {
        Vec h = cache.gru_forward.hidden[t];
        axpy(1.0, cache.gru_backward.hidden[m - 1 - t], h);
        Vec g = matvec(p.attention_weight, h);
        axpy(1.0, p.attention_bias, g);
        for (double& v : g) v = std::tanh(v);
        logits[t] = dot(p.attention_context, g);
        cache.states[t] = std::move(h);
        cache.projected[t] = std::move(g);
    }
    cache.attention = softmax(logits);
    cache.doc_probs.assign(p.config.classes, 0.0);
    for (std::size_t t = 0; t < m; ++t) axpy(cache.attention[t], cache.predictions[t], cache.doc_probs);
    return true;
}

void backward_review(const ReviewCache& cache, std::size_t label, const MilParams& p,
                     MilGrads& grads) {
    const std::size_t m = cache.segments.size();
    const std::size_t classes = p.config.classes;
    const std::size_t f_maps = p.config.feature_maps;

    // d(-log p_doc[label]) / dp_doc
    Vec dp_doc(classes, 0.0);
    dp_doc[label] = -1.0 / std::max(cache.doc_probs[label], 1e-300);

    std::vector<Vec> dp(m, Vec(classes, 0.0));  // grad into each segment prediction
    Vec dalpha(m);
    for (std::size_t t = 0; t < m; ++t) {
        dalpha[t] = dot(cache.predictions[t], dp_doc);
        axpy(cache.attention[t], dp_doc, dp[t]);
    }

    Vec dlogits = softmax_backward(cache.attention, dalpha);
    std::vector<Vec> dh(m, Vec(p.attention_bias.size(), 0.0));
    for (std::size_t t = 0; t < m; ++t) {
        const Vec& g = cache.projected[t];
        axpy(dlogits[t], g, grads.attention_context);
        Vec dg(g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
            dg[i] = dlogits[t] * p.attention_context[i] * (1.0 - g[i] * g[i]);
        add_outer(grads.attention_weight, dg, cache.states[t]);
        axpy(1.0, dg, grads.attention_bias);
        axpy(1.0, matvec_t(p.attention_weight, dg), dh[t]);
    }

    // split between the two directions; inputs are the prediction vectors
    std::vector<Vec> dh_fwd(m), dh_bwd(m);
    for (std::size_t t = 0; t < m; ++t) {
        dh_fwd[t] = dh[t];
        dh_bwd[m - 1 - t] = dh[t];
    }
    std::vector<Vec> din_fwd(m, Vec(classes, 0.0)), din_bwd(m, Vec(classes, 0.0));
    gru_backward(p.forward_gru, cache.inputs_fwd, cache.gru_forward, dh_fwd, grads.forward_gru,
                 din_fwd);
    gru_backward(p.backward_gru, cache.inputs_bwd, cache.gru_backward, dh_bwd, grads.backward_gru,
                 din_bwd);
    for (std::size_t t = 0; t < m; ++t) {
        axpy(1.0, din_fwd[t], dp[t]);
        axpy(1.0, din_bwd[m - 1 - t], dp[t]);
    }

    const std::size_t dim = p.filters.empty() ? 0 : p.filters[0].cols / p.config.windows[0];
    for (std::size_t t = 0; t < m; ++t) {
        Vec ds = softmax_backward(cache.predictions[t], dp[t]);
        add_outer(grads.segment_weight, ds, cache.cnn[t].encoding);
        axpy(1.0, ds, grads.segment_bias);
        Vec du = matvec_t(p.segment_weight, ds);
        const CnnCache& cnn = cache.cnn[t];
        for (std::size_t wi = 0; wi < p.config.windows.size(); ++wi) {
            const std::size_t width = p.config.windows[wi];
            for (std::size_t f = 0; f < f_maps; ++f) {
                const std::size_t idx = wi * f_maps + f;
                const double dpool =
                    du[idx] * (1.0 - cnn.encoding[idx] * cnn.encoding[idx]);
                grads.filter_bias[wi][f] += dpool;
                const std::size_t t_star = cnn.argmax[wi][f];
                auto grow = grads.filters[wi].row(f);
                for (std::size_t j = 0; j < width; ++j) {
                    if (t_star + j >= cache.segments[t].tokens.size()) break;  // zero padding
                    axpy(dpool, cache.segments[t].tokens[t_star + j],
                         grow.subspan(j * dim, dim));
                }
            }
        }
    }
}

std::vector<std::pair<std::span<double>, std::span<const double>>> mil_trainable_pairs(
    MilParams& p, MilGrads& g) {
    std::vector<std::pair<std::span<double>, std::span<const double>>> out;
    for (std::size_t wi = 0; wi < p.filters.size(); ++wi) {
        out.emplace_back(std::span<double>(p.filters[wi].data),
                         std::span<const double>(g.filters[wi].data));
        out.emplace_back(std::span<double>(p.filter_bias[wi]),
                         std::span<const double>(g.filter_bias[wi]));
    }
    out.emplace_back(std::span<double>(p.segment_weight.data),
                     std::span<const double>(g.segment_weight.data));
    out.emplace_back(std::span<double>(p.segment_bias), std::span<const double>(g.segment_bias));
    auto add_gru = [&out](GruCell& c, GruGrads& gg) {
        out.emplace_back(std::span<double>(c.w_update.data), std::span<const double>(gg.w_update.data));
        out.emplace_back(std::span<double>(c.u_update.data), std::span<const double>(gg.u_update.data));
        out.emplace_back(std::span<double>(c.b_update), std::span<const double>(gg.b_update));
        out.emplace_back(std::span<double>(c.w_reset.data), std::span<const double>(gg.w_reset.data));
        out.emplace_back(std::span<double>(c.u_reset.data), std::span<const double>(gg.u_reset.data));
        out.emplace_back(std::span<double>(c.b_reset), std::span<const double>(gg.b_reset));
        out.emplace_back(std::span<double>(c.w_cand.data), std::span<const double>(gg.w_cand.data));
        out.emplace_back(std::span<double>(c.u_cand.data), std::span<const double>(gg.u_cand.data));
        out.emplace_back(std::span<double>(c.b_cand), std::span<const double>(gg.b_cand));
    };
    add_gru(p.forward_gru, g.forward_gru);
    add_gru(p.backward_gru, g.backward_gru);
    out.emplace_back(std::span<double>(p.attention_weight.data),
                     std::span<const double>(g.attention_weight.data));
    out.emplace_back(std::span<double>(p.attention_bias),
                     std::span<const double>(g.attention_bias));
    out.emplace_back(std::span<double>(p.attention_context),
                     std::span<const double>(g.attention_context));
    return out;
}

GruCell init_gru(std::size_t input_dim, std::size_t hidden, Rng& rng) {
    GruCell c;
    auto mat = [&](std::size_t r, std::size_t cl) {
        Mat m(r, cl);
        for (double& x : m.data) x = rng.uniform(-0.05, 0.05);
        return m;
    };
    c.w_update = mat(hidden, input_dim);
    c.u_update = mat(hidden, hidden);
    c.b_update.assign(hidden, 0.0);
    c.w_reset = mat(hidden, input_dim);
    c.u_reset = mat(hidden, hidden);
    c.b_reset.assign(hidden, 0.0);
    c.w_cand = mat(hidden, input_dim);
    c.u_cand = mat(hidden, hidden);
    c.b_cand.assign(hidden, 0.0);
    return c;
}

}  // namespace

MilParams initialize_mil_params(const MilConfig& config, std::size_t dim) {
    if (config.classes < 2) throw ConfigError("sentiment class count must be >= 2");
    if (config.windows.empty()) throw ConfigError("at least one CNN window width required");
    MilParams p;
    p.config = config;
    Rng rng(config.seed + seed_offset::kMilInit);
    for (std::size_t width : config.windows) {
        Mat f(config.feature_maps, width * dim);
        for (double& x : f.data) x = rng.uniform(-0.05, 0.05);
        p.filters.push_back(std::move(f));
        p.filter_bias.emplace_back(config.feature_maps, 0.0);
    }
    const std::size_t enc = config.feature_maps * config.windows.size();
    p.segment_weight = Mat(config.classes, enc);
    for (double& x : p.segment_weight.data) x = rng.uniform(-0.05, 0.05);
    p.segment_bias.assign(config.classes, 0.0);
    p.forward_gru = init_gru(config.classes, config.attention_hidden, rng);
    p.backward_gru = init_gru(config.classes, config.attention_hidden, rng);
    p.attention_weight = Mat(config.attention_hidden, config.attention_hidden);
    for (double& x : p.attention_weight.data) x = rng.uniform(-0.05, 0.05);
    p.attention_bias.assign(config.attention_hidden, 0.0);
    p.attention_context.assign(config.attention_hidden, 0.0);
    for (double& x : p.attention_context) x = rng.uniform(-0.05, 0.05);
    p.class_weights = sentiment_class_weights(config.classes);
    return p;
}

namespace {

std::vector<const Segment*> segment_pointers(const Review& r) {
    std::vector<const Segment*> out;
    for (const Segment& s : r.segments) out.push_back(&s);
    return out;
}

}  // namespace

Vec sentiment_class_weights(std::size_t classes) {
    if (classes < 2) throw ConfigError("class weight vector needs >= 2 classes");
    Vec w(classes);
    for (std::size_t i = 0; i < classes; ++i)
        w[i] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(classes - 1);
    return w;
}

std::optional<Vec> encode_segment_cnn(const std::vector<std::string>& tokens,
                                      const EmbeddingTable& table, const MilParams& params) {
    const std::size_t max_window =
        *std::max_element(params.config.windows.begin(), params.config.windows.end());
    auto padded = pad_segment(tokens, table, max_window);
    if (!padded) return std::nullopt;
    Vec zero(table.dim(), 0.0);
    CnnCache cache;
    cnn_forward(*padded, params, table.dim(), zero, cache);
    return cache.encoding;
}

Vec segment_sentiment(const Vec& encoding, const MilParams& params) {
    Vec s = matvec(params.segment_weight, encoding);
    axpy(1.0, params.segment_bias, s);
    return softmax(s);
}

DocumentPrediction document_prediction(const std::vector<Vec>& segment_predictions,
                                       const MilParams& params) {
    if (segment_predictions.empty())
        throw ValidationError("document prediction needs at least one segment");
    const std::size_t m = segment_predictions.size();
    std::vector<const Vec*> fwd, bwd;
    for (std::size_t i = 0; i < m; ++i) fwd.push_back(&segment_predictions[i]);
    for (std::size_t i = m; i-- > 0;) bwd.push_back(&segment_predictions[i]);
    GruCache cf, cb;
    gru_forward(params.forward_gru, fwd, cf);
    gru_forward(params.backward_gru, bwd, cb);
    Vec logits(m);
    for (std::size_t t = 0; t < m; ++t) {
        Vec h = cf.hidden[t];
        axpy(1.0, cb.hidden[m - 1 - t], h);
        Vec g = matvec(params.attention_weight, h);
        axpy(1.0, params.attention_bias, g);
        for (double& v : g) v = std::tanh(v);
        logits[t] = dot(params.attention_context, g);
    }
    DocumentPrediction out;
    out.attention = softmax(logits);
    out.probabilities.assign(params.config.classes, 0.0);
    for (std::size_t t = 0; t < m; ++t)
        axpy(out.attention[t], segment_predictions[t], out.probabilities);
    return out;
}

double polarity(const Vec& sentiment_probs, const Vec& class_weights) {
    return dot(sentiment_probs, class_weights);
}

std::optional<double> review_nll(const Review& review, const MilParams& params,
                                 const EmbeddingTable& table) {
    ReviewCache cache;
    if (!forward_review(segment_pointers(review), params, table, cache)) return std::nullopt;
    const std::size_t label = static_cast<std::size_t>(review.rating - 1);
    return -std::log(std::max(cache.doc_probs[label], 1e-300));
}

MilParams train_mil(const Corpus& corpus, const MilConfig& config, const EmbeddingTable& table,
                    MilTrainStats* stats) {
    if (corpus.reviews.empty()) throw ValidationError("training corpus is empty");
    for (const Review& r : corpus.reviews)
        if (r.rating < 1 || static_cast<std::size_t>(r.rating) > config.classes)
            throw ValidationError("review " + r.review_id + ": rating outside [1, " +
                                  std::to_string(config.classes) + "]");

    MilParams params = initialize_mil_params(config, table.dim());
    MilTrainStats local;
    MilTrainStats& st = stats ? *stats : local;

    Rng shuffle_rng(config.seed + seed_offset::kMilShuffle);
    Adam adam(config.learning_rate);
    MilGrads grads(params);
    std::vector<Adam::State> adam_states(mil_trainable_pairs(params, grads).size());

    std::vector<std::size_t> order(corpus.reviews.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double epoch_nll = 0.0;
        std::size_t scored = 0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t end = std::min(order.size(), start + config.batch_size);
            MilGrads batch_grads(params);
            for (std::size_t b = start; b < end; ++b) {
                const Review& review = corpus.reviews[order[b]];
                ReviewCache cache;
                std::size_t* seg_counter = epoch == 0 ? &st.skipped_segments : nullptr;
                if (!forward_review(segment_pointers(review), params, table, cache, seg_counter)) {
                    if (epoch == 0) ++st.skipped_reviews;
                    continue;
                }
                const std::size_t label = static_cast<std::size_t>(review.rating - 1);
                epoch_nll += -std::log(std::max(cache.doc_probs[label], 1e-300));
                ++scored;
                backward_review(cache, label, params, batch_grads);
            }
            auto pairs = mil_trainable_pairs(params, batch_grads);
            for (std::size_t i = 0; i < pairs.size(); ++i)
                adam.step(pairs[i].first, pairs[i].second, adam_states[i]);
        }
        st.epoch_nll.push_back(scored ? epoch_nll / static_cast<double>(scored) : 0.0);
    }
    return params;
}

GradientCheckResult mil_gradient_check(const MilParams& params, const std::vector<Review>& batch,
                                       const EmbeddingTable& table, double epsilon) {
    MilParams work = params;
    MilGrads grads(work);
    for (const Review& review : batch) {
        ReviewCache cache;
        if (!forward_review(segment_pointers(review), work, table, cache)) continue;
        backward_review(cache, static_cast<std::size_t>(review.rating - 1), work, grads);
    }

    auto batch_loss = [&]() {
        double total = 0.0;
        for (const Review& review : batch)
            if (auto nll = review_nll(review, work, table)) total += *nll;
        return total;
    };

    GradientCheckResult result;
    auto pairs = mil_trainable_pairs(work, grads);
    for (auto& [theta, grad] : pairs) {
        for (std::size_t i = 0; i < theta.size(); ++i) {
            const double saved = theta[i];
            theta[i] = saved + epsilon;
            const double up = batch_loss();
            theta[i] = saved - epsilon;
            const double down = batch_loss();
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

void save_mil_model(const MilParams& params, const std::string& path) {
    Checkpoint c;
    c.kind = "mil_model";
    c.strings["seed"] = std::to_string(params.config.seed);
    c.scalars["classes"] = static_cast<double>(params.config.classes);
    c.scalars["feature_maps"] = static_cast<double>(params.config.feature_maps);
    c.scalars["attention_hidden"] = static_cast<double>(params.config.attention_hidden);
    c.scalars["learning_rate"] = params.config.learning_rate;
    c.scalars["epochs"] = static_cast<double>(params.config.epochs);
    c.scalars["batch_size"] = static_cast<double>(params.config.batch_size);
    Vec windows;
    for (std::size_t w : params.config.windows) windows.push_back(static_cast<double>(w));
    c.number_lists["windows"] = windows;

    for (std::size_t wi = 0; wi < params.filters.size(); ++wi) {
        c.add_tensor("filter_" + std::to_string(wi), params.filters[wi]);
        c.add_tensor("filter_bias_" + std::to_string(wi), Mat::from_row(params.filter_bias[wi]));
    }
    c.add_tensor("segment_weight", params.segment_weight);
    c.add_tensor("segment_bias", Mat::from_row(params.segment_bias));
    auto add_gru = [&c](const std::string& prefix, const GruCell& g) {
        c.add_tensor(prefix + "_w_update", g.w_update);
        c.add_tensor(prefix + "_u_update", g.u_update);
        c.add_tensor(prefix + "_b_update", Mat::from_row(g.b_update));
        c.add_tensor(prefix + "_w_reset", g.w_reset);
        c.add_tensor(prefix + "_u_reset", g.u_reset);
        c.add_tensor(prefix + "_b_reset", Mat::from_row(g.b_reset));
        c.add_tensor(prefix + "_w_cand", g.w_cand);
        c.add_tensor(prefix + "_u_cand", g.u_cand);
        c.add_tensor(prefix + "_b_cand", Mat::from_row(g.b_cand));
    };
    add_gru("gru_fwd", params.forward_gru);
    add_gru("gru_bwd", params.backward_gru);
    c.add_tensor("attention_weight", params.attention_weight);
    c.add_tensor("attention_bias", Mat::from_row(params.attention_bias));
    c.add_tensor("attention_context", Mat::from_row(params.attention_context));
    c.add_tensor("class_weights", Mat::from_row(params.class_weights));
    save_checkpoint(c, path);
}

MilParams load_mil_model(const std::string& path) {
    Checkpoint c = load_checkpoint(path);
    if (c.kind != "mil_model") throw ValidationError("checkpoint kind is not mil_model");
    MilParams p;
    p.config.seed = std::stoull(c.strings.at("seed"));
    p.config.classes = static_cast<std::size_t>(c.scalars.at("classes"));
    p.config.feature_maps = static_cast<std::size_t>(c.scalars.at("feature_maps"));
    p.config.attention_hidden = static_cast<std::size_t>(c.scalars.at("attention_hidden"));
    p.config.learning_rate = c.scalars.at("learning_rate");
    p.config.epochs = static_cast<std::size_t>(c.scalars.at("epochs"));
    p.config.batch_size = static_cast<std::size_t>(c.scalars.at("batch_size"));
    p.config.windows.clear();
    for (double w : c.number_lists.at("windows"))
        p.config.windows.push_back(static_cast<std::size_t>(w));

    for (std::size_t wi = 0; wi < p.config.windows.size(); ++wi) {
        p.filters.push_back(c.tensor("filter_" + std::to_string(wi)));
        p.filter_bias.push_back(c.tensor("filter_bias_" + std::to_string(wi)).data);
    }
    p.segment_weight = c.tensor("segment_weight");
    p.segment_bias = c.tensor("segment_bias").data;
    auto read_gru = [&c](const std::string& prefix) {
        GruCell g;
        g.w_update = c.tensor(prefix + "_w_update");
        g.u_update = c.tensor(prefix + "_u_update");
        g.b_update = c.tensor(prefix + "_b_update").data;
        g.w_reset = c.tensor(prefix + "_w_reset");
        g.u_reset = c.tensor(prefix + "_u_reset");
        g.b_reset = c.tensor(prefix + "_b_reset").data;
        g.w_cand = c.tensor(prefix + "_w_cand");
        g.u_cand = c.tensor(prefix + "_u_cand");
        g.b_cand = c.tensor(prefix + "_b_cand").data;
        return g;
    };
    p.forward_gru = read_gru("gru_fwd");
    p.backward_gru = read_gru("gru_bwd");
    p.attention_weight = c.tensor("attention_weight");
    p.attention_bias = c.tensor("attention_bias").data;
    p.attention_context = c.tensor("attention_context").data;
    p.class_weights = c.tensor("class_weights").data;
    return p;
}

std::optional<double> MilPolarityScorer::segment_polarity(
    const std::vector<std::string>& tokens) const {
    auto enc = encode_segment_cnn(tokens, *table_, params_);
    if (!enc) return std::nullopt;
    return polarity(segment_sentiment(*enc, params_), params_.class_weights);
}

LexiconPolarityScorer LexiconPolarityScorer::fit(const Corpus& corpus) {
    if (corpus.reviews.empty()) throw ValidationError("cannot fit polarity lexicon on empty corpus");
    std::unordered_map<std::string, double> sums;
    std::unordered_map<std::string, double> counts;
    for (const Review& r : corpus.reviews) {
        const double centered = (static_cast<double>(r.rating) - 3.0) / 2.0;
        for (const Segment& s : r.segments)
            for (const std::string& t : s.tokens) {
                sums[t] += centered;
                counts[t] += 1.0;
            }
    }
    LexiconPolarityScorer out;
    for (const auto& [token, sum] : sums) out.scores_[token] = sum / counts[token];
    return out;
}

double LexiconPolarityScorer::token_score(const std::string& token) const {
    auto it = scores_.find(token);
    return it == scores_.end() ? 0.0 : it->second;
}

std::optional<double> LexiconPolarityScorer::segment_polarity(
    const std::vector<std::string>& tokens) const {
    double sum = 0.0;
    std::size_t known = 0;
    for (const std::string& t : tokens) {
        auto it = scores_.find(t);
        if (it != scores_.end()) {
            sum += it->second;
            ++known;
        }
    }
    if (known == 0) return std::nullopt;
    return std::clamp(sum / static_cast<double>(known), -1.0, 1.0);
}

}  // namespace opsum
