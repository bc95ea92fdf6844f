#include "opsum/evaluation.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <unordered_map>

#include "json.hpp"
#include "opsum/errors.hpp"

namespace opsum {

namespace {

double f1(double precision, double recall) {
    if (precision <= 0.0 || recall <= 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

std::optional<double> mean_of(const std::vector<double>& xs) {
    if (xs.empty()) return std::nullopt;
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

}  // namespace

DomainScores EvalReport::average() const {
    DomainScores avg;
    std::vector<double> f1s, maps, p5s, r1s, r2s, rls;
    for (const auto& [_, d] : domains) {
        if (d.aspect_f1) f1s.push_back(*d.aspect_f1);
        if (d.map) maps.push_back(*d.map);
        if (d.p_at_5) p5s.push_back(*d.p_at_5);
        if (d.rouge1) r1s.push_back(*d.rouge1);
        if (d.rouge2) r2s.push_back(*d.rouge2);
        if (d.rougeL) rls.push_back(*d.rougeL);
        avg.aspect_segments += d.aspect_segments;
        avg.salience_products += d.salience_products;
        avg.rouge_products += d.rouge_products;
    }
    avg.aspect_f1 = mean_of(f1s);
    avg.map = mean_of(maps);
    avg.p_at_5 = mean_of(p5s);
    avg.rouge1 = mean_of(r1s);
    avg.rouge2 = mean_of(r2s);
    avg.rougeL = mean_of(rls);
    return avg;
}

namespace {

nlohmann::json scores_to_json(const DomainScores& s) {
    nlohmann::json j;
    auto put = [&j](const char* key, const std::optional<double>& v) {
        if (v) j[key] = *v;
    };
    put("aspect_f1", s.aspect_f1);
    put("map", s.map);
    put("p_at_5", s.p_at_5);
    put("rouge1", s.rouge1);
    put("rouge2", s.rouge2);
    put("rougeL", s.rougeL);
    j["aspect_segments"] = s.aspect_segments;
    j["salience_products"] = s.salience_products;
    j["rouge_products"] = s.rouge_products;
    return j;
}

}  // namespace

std::string EvalReport::to_json() const {
    nlohmann::json j;
    for (const auto& [name, scores] : domains) j["domains"][name] = scores_to_json(scores);
    j["average"] = scores_to_json(average());
    return j.dump(2) + "\n";
}

std::string EvalReport::to_table() const {
    std::string out;
    char buf[128];
    auto cell = [&buf](const std::optional<double>& v) -> std::string {
        if (!v) return "     -";
        std::snprintf(buf, sizeof(buf), "%6.1f", *v * 100.0);
        return buf;
    };
    std::vector<std::string> names;
    for (const auto& [name, _] : domains) names.push_back(name);

    auto row = [&](const std::string& label,
                   std::optional<double> (*get)(const DomainScores&)) {
        std::string line = label;
        line.resize(28, ' ');
        for (const std::string& n : names) line += cell(get(domains.at(n))) + "  ";
        line += cell(get(average()));
        return line + "\n";
    };
    std::string header(28, ' ');
    for (const std::string& n : names) {
        std::string col = n.size() > 6 ? n.substr(0, 6) : n;
        std::snprintf(buf, sizeof(buf), "%6s  ", col.c_str());
        header += buf;
    }
    header += "   AVG\n";

    out += "Aspect Extraction (F1)\n" + header;
    out += row("  system", [](const DomainScores& s) { return s.aspect_f1; });
    out += "Salience (MAP / P@5)\n" + header;
    out += row("  MAP", [](const DomainScores& s) { return s.map; });
    out += row("  P@5", [](const DomainScores& s) { return s.p_at_5; });
    out += "Summarization (ROUGE F1)\n" + header;
    out += row("  ROUGE-1", [](const DomainScores& s) { return s.rouge1; });
    out += row("  ROUGE-2", [](const DomainScores& s) { return s.rouge2; });
    out += row("  ROUGE-L", [](const DomainScores& s) { return s.rougeL; });
    return out;
}

double aspect_f1_micro(const std::map<std::string, std::set<std::string>>& predictions,
                       const std::vector<AspectAnnotation>& gold) {
    double tp = 0.0, fp = 0.0, fn = 0.0;
    for (const AspectAnnotation& g : gold) {
        auto it = predictions.find(g.segment_id);
        if (it == predictions.end())
            throw ValidationError("no prediction for annotated segment: " + g.segment_id);
        for (const std::string& a : it->second)
            g.aspects.contains(a) ? tp += 1.0 : fp += 1.0;
        for (const std::string& a : g.aspects)
            if (!it->second.contains(a)) fn += 1.0;
    }
    const double denom_p = tp + fp, denom_r = tp + fn;
    if (denom_p == 0.0 || denom_r == 0.0) return 0.0;
    return f1(tp / denom_p, tp / denom_r);
}

double average_precision(const std::vector<std::string>& ranking,
                         const std::set<std::string>& relevant) {
    if (relevant.empty()) return 0.0;
    double hits = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < ranking.size(); ++i) {
        if (relevant.contains(ranking[i])) {
            hits += 1.0;
            sum += hits / static_cast<double>(i + 1);
        }
    }
    return sum / static_cast<double>(relevant.size());
}

double precision_at_k(const std::vector<std::string>& ranking,
                      const std::set<std::string>& relevant, std::size_t k) {
    if (k == 0) throw ValidationError("precision_at_k: k must be >= 1");
    double hits = 0.0;
    for (std::size_t i = 0; i < std::min(k, ranking.size()); ++i)
        if (relevant.contains(ranking[i])) hits += 1.0;
    return hits / static_cast<double>(k);
}

SalienceEvalResult salience_eval(
    const std::map<std::string, std::vector<std::string>>& rankings_per_product,
    const std::vector<SalienceAnnotation>& annotations, const Corpus& corpus) {
    // segment -> product and the per-annotator relevant sets per product
    std::unordered_map<std::string, std::string> segment_product;
    for (const Review& r : corpus.reviews)
        for (const Segment& s : r.segments) segment_product[s.segment_id] = r.product_id;

    std::map<std::string, std::map<std::string, std::set<std::string>>> relevant;  // product -> annotator -> segments
    for (const SalienceAnnotation& a : annotations) {
        auto it = segment_product.find(a.segment_id);
        if (it == segment_product.end())
            throw ValidationError("salience annotation for unknown segment: " + a.segment_id);
        for (const auto& [annotator, label] : a.labels)
            if (label == 1) relevant[it->second][annotator].insert(a.segment_id);
        // make sure annotators with all-zero labels still participate
        for (const auto& [annotator, _] : a.labels) relevant[it->second][annotator];
    }

    SalienceEvalResult result;
    double map_sum = 0.0, p5_sum = 0.0;
    for (const auto& [product, ranking] : rankings_per_product) {
        auto it = relevant.find(product);
        if (it == relevant.end()) continue;
        double ap = 0.0, p5 = 0.0;
        for (const auto& [_, rel] : it->second) {
            ap += average_precision(ranking, rel);
            p5 += precision_at_k(ranking, rel, 5);
        }
        const double annotators = static_cast<double>(it->second.size());
        map_sum += ap / annotators;
        p5_sum += p5 / annotators;
        ++result.products;
    }
    if (result.products > 0) {
        result.map = map_sum / static_cast<double>(result.products);
        result.p_at_5 = p5_sum / static_cast<double>(result.products);
    }
    return result;
}

namespace {

std::map<std::vector<std::string>, std::size_t> ngram_counts(
    const std::vector<std::string>& tokens, std::size_t n) {
    std::map<std::vector<std::string>, std::size_t> counts;
    if (tokens.size() < n) return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i)
        ++counts[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)];
    return counts;
}

double rouge_n_single(const std::vector<std::string>& candidate,
                      const std::vector<std::string>& reference, std::size_t n) {
    auto cand = ngram_counts(candidate, n);
    auto ref = ngram_counts(reference, n);
    if (cand.empty() || ref.empty()) return 0.0;
    double overlap = 0.0, cand_total = 0.0, ref_total = 0.0;
    for (const auto& [g, c] : cand) {
        cand_total += static_cast<double>(c);
        auto it = ref.find(g);
        if (it != ref.end()) overlap += static_cast<double>(std::min(c, it->second));
    }
    for (const auto& [_, c] : ref) ref_total += static_cast<double>(c);
    return f1(overlap / cand_total, overlap / ref_total);
}

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            if (a[i - 1] == b[j - 1])
                cur[j] = prev[j - 1] + 1;
            else
                cur[j] = std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

double rouge_l_single(const std::vector<std::string>& candidate,
                      const std::vector<std::string>& reference) {
    if (candidate.empty() || reference.empty()) return 0.0;
    const double lcs = static_cast<double>(lcs_length(candidate, reference));
    return f1(lcs / static_cast<double>(candidate.size()),
              lcs / static_cast<double>(reference.size()));
}

}  // namespace

double rouge_n(const std::vector<std::string>& candidate,
               const std::vector<std::vector<std::string>>& references, std::size_t n) {
    if (n < 1) throw ValidationError("rouge_n: n must be >= 1");
    double best = 0.0;
    for (const auto& ref : references) best = std::max(best, rouge_n_single(candidate, ref, n));
    return best;
}

double rouge_l(const std::vector<std::string>& candidate,
               const std::vector<std::vector<std::string>>& references) {
    double best = 0.0;
    for (const auto& ref : references) best = std::max(best, rouge_l_single(candidate, ref));
    return best;
}

std::vector<std::string> rouge_tokenize(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (unsigned char c : text) {
        if (std::isspace(c)) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(static_cast<char>(std::tolower(c)));
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

RougeTriple interannotator_rouge(const std::vector<std::vector<std::string>>& reference_tokens) {
    if (reference_tokens.size() < 2)
        throw ValidationError("inter-annotator agreement needs at least two references");
    RougeTriple total;
    for (std::size_t i = 0; i < reference_tokens.size(); ++i) {
        std::vector<std::vector<std::string>> rest;
        for (std::size_t j = 0; j < reference_tokens.size(); ++j)
            if (j != i) rest.push_back(reference_tokens[j]);
        total.rouge1 += rouge_n(reference_tokens[i], rest, 1);
        total.rouge2 += rouge_n(reference_tokens[i], rest, 2);
        total.rougeL += rouge_l(reference_tokens[i], rest);
    }
    const double n = static_cast<double>(reference_tokens.size());
    total.rouge1 /= n;
    total.rouge2 /= n;
    total.rougeL /= n;
    return total;
}

}  // namespace opsum
