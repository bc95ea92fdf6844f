#include "opsum/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <set>

#include "json.hpp"
#include "opsum/aspect_model.hpp"
#include "opsum/corpus.hpp"
#include "opsum/embeddings.hpp"
#include "opsum/errors.hpp"
#include "opsum/evaluation.hpp"
#include "opsum/polarity.hpp"
#include "opsum/rng.hpp"
#include "opsum/seeds.hpp"
#include "opsum/summarizer.hpp"

namespace opsum {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void require_file(const std::string& path, const std::string& what) {
    if (path.empty()) throw ConfigError(what + " is not configured");
    if (!fs::exists(path)) throw ConfigError(what + " not found: " + path);
}

StopwordSet stopwords_for(const PipelineConfig& c) {
    if (c.corpus_stopwords.empty()) return default_stopwords();
    require_file(c.corpus_stopwords, "stopword file");
    return load_stopwords(c.corpus_stopwords);
}

Corpus load_main_corpus(const PipelineConfig& c, const StopwordSet& stopwords) {
    require_file(c.corpus_reviews, "review file");
    if (c.corpus_domain.empty()) throw ConfigError("corpus.domain is not configured");
    return load_corpus(c.corpus_reviews, c.corpus_domain, stopwords);
}

std::size_t general_index_for(const PipelineConfig& c,
                              const std::vector<std::string>& aspect_names) {
    auto it = std::find(aspect_names.begin(), aspect_names.end(), c.general_aspect);
    if (it == aspect_names.end())
        throw ConfigError("general aspect '" + c.general_aspect + "' not among aspect names");
    return static_cast<std::size_t>(it - aspect_names.begin());
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

std::string format_score(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

}  // namespace

void cmd_extract_seeds(const PipelineConfig& config, std::ostream& log) {
    require_file(config.corpus_annotations, "annotation file");
    require_file(config.embeddings_path, "embedding file");
    if (config.aspect_names.empty()) throw ConfigError("aspects.names is not configured");
    if (config.seeds_path.empty()) throw ConfigError("seeds.path is not configured");

    const StopwordSet stopwords = stopwords_for(config);
    const Corpus corpus = load_main_corpus(config, stopwords);
    const AnnotationSet annotations =
        load_annotations(config.corpus_annotations, corpus, config.aspect_names);
    if (annotations.aspects.empty())
        throw ValidationError("annotation file has no aspect records");
    const EmbeddingTable table = load_embeddings(config.embeddings_path);
    const Vocabulary vocabulary = build_vocabulary(corpus, config.corpus_min_count);

    std::vector<std::pair<const Segment*, std::set<std::string>>> labeled;
    for (const AspectAnnotation& a : annotations.aspects) {
        const Segment* seg = corpus.find_segment(a.segment_id);
        labeled.emplace_back(seg, std::set<std::string>(a.aspects.begin(), a.aspects.end()));
    }

    std::map<std::string, ClarityScores> scores;
    for (const std::string& aspect : config.aspect_names)
        scores[aspect] = clarity_scores(labeled, aspect, vocabulary);
    const SeedSet seeds = extract_seeds(scores, config.aspect_names, config.seeds_count, table);

    fs::create_directories(config.out_dir);
    save_seeds(seeds, config.seeds_path);
    log << "wrote " << config.seeds_path << " (" << seeds.aspect_names.size() << " aspects x "
        << seeds.seeds_per_aspect() << " seeds)\n";

    // human-readable top-terms table
    std::string top = "Aspect\tTop Terms\n";
    for (const std::string& aspect : seeds.aspect_names) {
        top += aspect + "\t";
        const auto& entries = seeds.seeds.at(aspect);
        for (std::size_t i = 0; i < std::min<std::size_t>(5, entries.size()); ++i) {
            if (i) top += ' ';
            top += entries[i].first;
        }
        top += '\n';
    }
    write_file(config.out_dir + "/seed_top_terms.txt", top);
}

namespace {

std::string trace_json(const std::vector<double>& reconstruction,
                       const std::vector<double>& domain_nll, std::size_t skipped) {
    json j;
    j["epoch_reconstruction"] = reconstruction;
    j["epoch_domain_nll"] = domain_nll;
    j["skipped_segments"] = skipped;
    return j.dump(2) + "\n";
}

}  // namespace

void cmd_train_aspects(const PipelineConfig& config, std::ostream& log) {
    require_file(config.embeddings_path, "embedding file");
    const StopwordSet stopwords = stopwords_for(config);
    const Corpus corpus = load_main_corpus(config, stopwords);
    std::vector<Corpus> out_of_domain;
    for (const auto& [domain, path] : config.out_of_domain) {
        require_file(path, "out-of-domain review file");
        out_of_domain.push_back(load_corpus(path, domain, stopwords));
    }
    const EmbeddingTable table = load_embeddings(config.embeddings_path);

    AspectModelConfig model_config;
    model_config.variant = aspect_variant_from_string(config.aspect_variant);
    model_config.negative_samples = config.aspect_negatives;
    model_config.multitask_weight = config.aspect_lambda;
    model_config.learning_rate = config.aspect_learning_rate;
    model_config.batch_size = config.aspect_batch_size;
    model_config.epochs = config.aspect_epochs;
    model_config.seed = config.seed;
    model_config.aspect_count =
        config.aspect_count ? config.aspect_count : config.aspect_names.size();

    SeedSet seeds;
    const SeedSet* seeds_ptr = nullptr;
    Vocabulary vocabulary;
    const Vocabulary* vocabulary_ptr = nullptr;
    if (model_config.variant == AspectVariant::abae) {
        vocabulary = build_vocabulary(corpus, config.corpus_min_count);
        vocabulary_ptr = &vocabulary;
    } else {
        require_file(config.seeds_path, "seed file");
        seeds = load_seeds(config.seeds_path, table);
        seeds_ptr = &seeds;
    }

    AspectTrainStats stats;
    AspectModelParams params =
        train_aspect_model(corpus, out_of_domain, model_config, table, seeds_ptr, vocabulary_ptr,
                           &stats);

    fs::create_directories(fs::path(config.aspect_checkpoint_path()).parent_path().empty()
                               ? "."
                               : fs::path(config.aspect_checkpoint_path()).parent_path().string());
    save_aspect_model(params, config.aspect_checkpoint_path());
    write_file(config.aspect_checkpoint_path() + ".trace.json",
               trace_json(stats.epoch_reconstruction, stats.epoch_domain_nll,
                          stats.skipped_segments));
    for (std::size_t e = 0; e < stats.epoch_reconstruction.size(); ++e) {
        log << "epoch " << e + 1 << ": reconstruction " << stats.epoch_reconstruction[e];
        if (params.multitask()) log << ", domain nll " << stats.epoch_domain_nll[e];
        log << "\n";
    }
    if (stats.skipped_segments)
        log << "skipped " << stats.skipped_segments << " segments without in-vocabulary tokens\n";
    log << "wrote " << config.aspect_checkpoint_path() << "\n";
}

void cmd_train_polarity(const PipelineConfig& config, std::ostream& log) {
    require_file(config.embeddings_path, "embedding file");
    const StopwordSet stopwords = stopwords_for(config);
    const Corpus corpus = load_main_corpus(config, stopwords);
    const EmbeddingTable table = load_embeddings(config.embeddings_path);

    MilConfig mil_config;
    mil_config.classes = config.mil_classes;
    mil_config.windows = config.mil_windows;
    mil_config.feature_maps = config.mil_feature_maps;
    mil_config.attention_hidden = config.mil_attention_hidden;
    mil_config.learning_rate = config.mil_learning_rate;
    mil_config.batch_size = config.mil_batch_size;
    mil_config.epochs = config.mil_epochs;
    mil_config.seed = config.seed;

    MilTrainStats stats;
    MilParams params = train_mil(corpus, mil_config, table, &stats);

    fs::create_directories(fs::path(config.mil_checkpoint_path()).parent_path().empty()
                               ? "."
                               : fs::path(config.mil_checkpoint_path()).parent_path().string());
    save_mil_model(params, config.mil_checkpoint_path());
    json trace;
    trace["epoch_nll"] = stats.epoch_nll;
    trace["skipped_segments"] = stats.skipped_segments;
    trace["skipped_reviews"] = stats.skipped_reviews;
    write_file(config.mil_checkpoint_path() + ".trace.json", trace.dump(2) + "\n");
    for (std::size_t e = 0; e < stats.epoch_nll.size(); ++e)
        log << "epoch " << e + 1 << ": nll " << stats.epoch_nll[e] << "\n";
    log << "wrote " << config.mil_checkpoint_path() << "\n";
}

void cmd_summarize(const PipelineConfig& config, std::ostream& log) {
    const StopwordSet stopwords = stopwords_for(config);
    const Corpus corpus = load_main_corpus(config, stopwords);
    if (config.summary_budget == 0)
        log << "warning: summary.budget is 0, all summaries will be empty\n";

    const bool model_based =
        config.summary_system == "full" || config.summary_system == "no-redundancy";

    EmbeddingTable table;
    AspectModelParams aspect_params;
    std::unique_ptr<PolarityScorer> scorer;
    std::size_t general_index = 0;
    if (model_based) {
        require_file(config.embeddings_path, "embedding file");
        require_file(config.aspect_checkpoint_path(), "aspect model checkpoint");
        table = load_embeddings(config.embeddings_path);
        aspect_params = load_aspect_model(config.aspect_checkpoint_path());
        general_index = general_index_for(config, aspect_params.aspect_names);
        if (config.polarity_backend == "mil") {
            require_file(config.mil_checkpoint_path(), "polarity model checkpoint");
            scorer = std::make_unique<MilPolarityScorer>(
                load_mil_model(config.mil_checkpoint_path()), table);
        } else {
            scorer = std::make_unique<LexiconPolarityScorer>(LexiconPolarityScorer::fit(corpus));
        }
    }

    fs::create_directories(config.out_dir);
    std::string summaries_jsonl, summaries_text, opinions_jsonl;
    const double threshold =
        config.summary_system == "no-redundancy" ? 2.0 : config.summary_threshold;

    std::size_t product_ordinal = 0;
    for (const auto& [product_id, review_indices] : corpus.products) {
        std::vector<const Review*> reviews;
        for (std::size_t i : review_indices) reviews.push_back(&corpus.reviews[i]);

        Summary summary;
        if (model_based) {
            std::vector<Opinion> ranked =
                rank_opinions(reviews, aspect_params, *scorer, table, general_index);
            std::size_t rank = 0;
            for (const Opinion& op : ranked) {
                json jo;
                jo["segment_id"] = op.segment_id;
                jo["product_id"] = product_id;
                jo["rank"] = rank++;
                jo["aspect"] = op.aspect_name;
                jo["aspect_probs"] = op.aspect_probs;
                jo["polarity"] = op.polarity;
                jo["salience"] = op.salience;
                opinions_jsonl += jo.dump() + "\n";
            }
            summary = redundancy_filter(product_id, ranked, table, threshold,
                                        config.summary_budget);
        } else if (config.summary_system == "random") {
            summary = random_summary(product_id, reviews, config.summary_budget,
                                     config.seed + seed_offset::kRandomSummary + product_ordinal);
        } else {
            summary = lead_summary(product_id, reviews, config.summary_budget);
        }
        ++product_ordinal;

        json js;
        js["product_id"] = summary.product_id;
        js["word_count"] = summary.word_count;
        json segs = json::array();
        for (const SummarySegment& s : summary.segments) {
            json seg;
            seg["segment_id"] = s.segment_id;
            seg["text"] = s.text;
            if (model_based) {
                seg["aspect"] = s.aspect;
                seg["polarity"] = s.polarity;
                seg["salience"] = s.salience;
            }
            segs.push_back(std::move(seg));
        }
        js["segments"] = std::move(segs);
        summaries_jsonl += js.dump() + "\n";

        summaries_text += "== " + summary.product_id + " ==\n";
        for (const SummarySegment& s : summary.segments) summaries_text += s.text + "\n";
        summaries_text += "\n";
    }

    write_file(config.summaries_path(), summaries_jsonl);
    write_file(config.out_dir + "/summaries.txt", summaries_text);
    if (model_based) write_file(config.predictions_path(), opinions_jsonl);
    log << "wrote " << config.summaries_path() << " (" << corpus.products.size()
        << " products, system=" << config.summary_system << ")\n";
}

void cmd_evaluate(const PipelineConfig& config, std::ostream& log) {
    const StopwordSet stopwords = stopwords_for(config);
    const Corpus corpus = load_main_corpus(config, stopwords);
    require_file(config.corpus_annotations, "annotation file");
    const AnnotationSet annotations =
        load_annotations(config.corpus_annotations, corpus, config.aspect_names);
    for (const std::string& w : annotations.warnings) log << "warning: " << w << "\n";

    EvalReport report;
    DomainScores scores;
    json extras;

    if (config.eval_aspects || config.eval_salience) {
        require_file(config.predictions_path(), "predictions file");
        std::ifstream in(config.predictions_path());
        std::map<std::string, std::set<std::string>> predicted_aspects;
        std::map<std::string, std::vector<std::pair<std::size_t, std::string>>> ranked;
        std::string line;
        long line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            json j = json::parse(line, nullptr, false);
            if (j.is_discarded()) throw ParseError("invalid JSON in predictions", line_no);
            const std::string segment_id = j.at("segment_id").get<std::string>();
            predicted_aspects[segment_id].insert(j.at("aspect").get<std::string>());
            ranked[j.at("product_id").get<std::string>()].emplace_back(
                j.at("rank").get<std::size_t>(), segment_id);
        }

        if (config.eval_aspects && !annotations.aspects.empty()) {
            scores.aspect_f1 = aspect_f1_micro(predicted_aspects, annotations.aspects);
            scores.aspect_segments = annotations.aspects.size();
        }
        if (config.eval_salience && !annotations.salience.empty()) {
            std::map<std::string, std::vector<std::string>> rankings;
            for (auto& [product, entries] : ranked) {
                std::sort(entries.begin(), entries.end());
                std::vector<std::string>& ids = rankings[product];
                for (const auto& [_, segment_id] : entries) ids.push_back(segment_id);
            }
            SalienceEvalResult sal = salience_eval(rankings, annotations.salience, corpus);
            scores.map = sal.map;
            scores.p_at_5 = sal.p_at_5;
            scores.salience_products = sal.products;
        }
    }

    if (config.eval_rouge && !annotations.summaries.empty()) {
        require_file(config.summaries_path(), "summaries file");
        std::ifstream in(config.summaries_path());
        std::map<std::string, std::string> candidate_text;
        std::string line;
        long line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            json j = json::parse(line, nullptr, false);
            if (j.is_discarded()) throw ParseError("invalid JSON in summaries", line_no);
            std::string text;
            for (const json& seg : j.at("segments")) {
                text += seg.at("text").get<std::string>();
                text += "\n";
            }
            candidate_text[j.at("product_id").get<std::string>()] = std::move(text);
        }

        std::map<std::string, std::vector<std::vector<std::string>>> references;
        for (const GoldSummary& g : annotations.summaries) {
            std::string text;
            for (const std::string& sid : g.summary_segment_ids) {
                text += corpus.find_segment(sid)->text;
                text += "\n";
            }
            references[g.product_id].push_back(rouge_tokenize(text));
        }

        double r1 = 0.0, r2 = 0.0, rl = 0.0;
        std::size_t n = 0;
        for (const auto& [product, refs] : references) {
            auto it = candidate_text.find(product);
            if (it == candidate_text.end())
                throw ValidationError("no summary produced for annotated product: " + product);
            auto cand = rouge_tokenize(it->second);
            r1 += rouge_n(cand, refs, 1);
            r2 += rouge_n(cand, refs, 2);
            rl += rouge_l(cand, refs);
            ++n;
        }
        if (n > 0) {
            scores.rouge1 = r1 / static_cast<double>(n);
            scores.rouge2 = r2 / static_cast<double>(n);
            scores.rougeL = rl / static_cast<double>(n);
            scores.rouge_products = n;
        }

        if (config.eval_interannotator) {
            double a1 = 0.0, a2 = 0.0, al = 0.0;
            std::size_t products = 0;
            for (const auto& [product, refs] : references) {
                if (refs.size() < 2) continue;
                RougeTriple t = interannotator_rouge(refs);
                a1 += t.rouge1;
                a2 += t.rouge2;
                al += t.rougeL;
                ++products;
            }
            if (products > 0) {
                extras["interannotator"] = {{"rouge1", a1 / static_cast<double>(products)},
                                            {"rouge2", a2 / static_cast<double>(products)},
                                            {"rougeL", al / static_cast<double>(products)},
                                            {"products", products}};
            }
        }
    }

    report.domains[corpus.domain_id] = scores;
    fs::create_directories(config.out_dir);
    std::string report_json = report.to_json();
    if (!extras.empty()) {
        json merged = json::parse(report_json);
        merged.update(extras);
        report_json = merged.dump(2) + "\n";
    }
    write_file(config.out_dir + "/report.json", report_json);
    write_file(config.out_dir + "/report.txt", report.to_table());
    log << report.to_table();
    if (extras.contains("interannotator"))
        log << "inter-annotator ROUGE-1/2/L: "
            << format_score(extras["interannotator"]["rouge1"].get<double>()) << " / "
            << format_score(extras["interannotator"]["rouge2"].get<double>()) << " / "
            << format_score(extras["interannotator"]["rougeL"].get<double>()) << "\n";
}

}  // namespace opsum
