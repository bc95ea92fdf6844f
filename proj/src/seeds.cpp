#include "opsum/seeds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <unordered_map>

#include "opsum/errors.hpp"

namespace opsum {

void SeedSet::validate(const EmbeddingTable& table) const {
    if (aspect_names.empty()) throw ValidationError("seed set has no aspects");
    std::size_t l = 0;
    for (const std::string& name : aspect_names) {
        auto it = seeds.find(name);
        if (it == seeds.end()) throw ValidationError("seed set missing aspect: " + name);
        const auto& entries = it->second;
        if (entries.empty()) throw ValidationError("aspect '" + name + "' has no seeds");
        if (l == 0) l = entries.size();
        if (entries.size() != l)
            throw ValidationError("aspect '" + name + "' has " +
                                  std::to_string(entries.size()) + " seeds, expected " +
                                  std::to_string(l));
        double sum = 0.0;
        std::set<std::string> uniq;
        for (const auto& [word, weight] : entries) {
            if (weight <= 0.0)
                throw ValidationError("non-positive seed weight for '" + word + "' in aspect '" +
                                      name + "'");
            if (!uniq.insert(word).second)
                throw ValidationError("duplicate seed word '" + word + "' in aspect '" + name +
                                      "'");
            if (!table.contains(word))
                throw ValidationError("seed word '" + word + "' missing from embedding table");
            sum += weight;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw ValidationError("seed weights for aspect '" + name + "' sum to " +
                                  std::to_string(sum) + ", expected 1");
    }
}

std::vector<std::string> ClarityScores::ranked() const {
    std::vector<std::string> words;
    words.reserve(scores_.size());
    for (const auto& [w, _] : scores_) words.push_back(w);
    std::stable_sort(words.begin(), words.end(), [&](const std::string& a, const std::string& b) {
        double sa = scores_.at(a), sb = scores_.at(b);
        if (sa != sb) return sa > sb;
        return a < b;
    });
    return words;
}

ClarityScores clarity_scores(
    const std::vector<std::pair<const Segment*, std::set<std::string>>>& labeled,
    const std::string& aspect, const Vocabulary& vocabulary) {
    if (labeled.empty()) throw ValidationError("clarity_scores: no labeled segments");

    // df / N over the labeled segments only
    const double n_labeled = static_cast<double>(labeled.size());
    std::unordered_map<std::string, double> df;
    bool aspect_seen = false;
    for (const auto& [seg, aspects] : labeled) {
        if (aspects.contains(aspect)) aspect_seen = true;
        std::set<std::string> uniq(seg->tokens.begin(), seg->tokens.end());
        for (const std::string& t : uniq)
            if (vocabulary.contains(t)) df[t] += 1.0;
    }
    if (!aspect_seen)
        throw ValidationError("clarity_scores: no segments labeled with aspect '" + aspect + "'");

    std::unordered_map<std::string, double> tf_aspect, tf_all;
    for (const auto& [seg, aspects] : labeled) {
        const bool in_aspect = aspects.contains(aspect);
        for (const std::string& t : seg->tokens) {
            if (!vocabulary.contains(t)) continue;
            tf_all[t] += 1.0;
            if (in_aspect) tf_aspect[t] += 1.0;
        }
    }

    auto l1_tfidf = [&](const std::unordered_map<std::string, double>& tf) {
        std::unordered_map<std::string, double> weights;
        double sum = 0.0;
        for (const auto& [w, count] : tf) {
            double x = count * std::log(n_labeled / df.at(w));
            weights[w] = x;
            sum += x;
        }
        if (sum > 0.0)
            for (auto& [w, x] : weights) x /= sum;
        return weights;
    };
    auto t_aspect = l1_tfidf(tf_aspect);
    auto t_all = l1_tfidf(tf_all);

    ClarityScores out;
    for (const auto& [w, ta] : t_aspect) {
        if (ta <= 0.0) continue;
        out.scores_[w] = ta * std::log2(ta / t_all.at(w));
    }
    return out;
}

SeedSet extract_seeds(const std::map<std::string, ClarityScores>& scores_per_aspect,
                      const std::vector<std::string>& aspect_order, std::size_t l,
                      const EmbeddingTable& table) {
    if (l == 0) throw ValidationError("extract_seeds: l must be positive");
    SeedSet out;
    out.aspect_names = aspect_order;
    for (const std::string& aspect : aspect_order) {
        auto it = scores_per_aspect.find(aspect);
        if (it == scores_per_aspect.end())
            throw ValidationError("extract_seeds: no scores for aspect '" + aspect + "'");

        std::vector<std::pair<std::string, double>> eligible;
        for (const auto& [word, score] : it->second.occurring())
            if (score > 0.0 && table.contains(word)) eligible.emplace_back(word, score);
        if (eligible.size() < l)
            throw ValidationError("aspect '" + aspect + "' has only " +
                                  std::to_string(eligible.size()) +
                                  " eligible seed words, need " + std::to_string(l));
        std::stable_sort(eligible.begin(), eligible.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        eligible.resize(l);
        double sum = 0.0;
        for (const auto& [_, score] : eligible) sum += score;
        for (auto& [_, score] : eligible) score /= sum;
        out.seeds[aspect] = std::move(eligible);
    }
    return out;
}

void save_seeds(const SeedSet& seeds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write seed file: " + path);
    char buf[64];
    for (const std::string& aspect : seeds.aspect_names) {
        out << aspect;
        for (const auto& [word, weight] : seeds.seeds.at(aspect)) {
            std::snprintf(buf, sizeof(buf), "%.17g", weight);
            out << '\t' << word << ':' << buf;
        }
        out << '\n';
    }
}

SeedSet load_seeds(const std::string& path, const EmbeddingTable& table) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open seed file: " + path);
    SeedSet out;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            std::size_t tab = line.find('\t', start);
            fields.push_back(line.substr(start, tab - start));
            if (tab == std::string::npos) break;
            start = tab + 1;
        }
        if (fields.size() < 2) throw ParseError("seed line needs aspect and seeds", line_no);
        const std::string& aspect = fields[0];
        if (out.seeds.contains(aspect)) throw ParseError("duplicate aspect: " + aspect, line_no);
        std::vector<std::pair<std::string, double>> entries;
        for (std::size_t i = 1; i < fields.size(); ++i) {
            std::size_t colon = fields[i].rfind(':');
            if (colon == std::string::npos || colon == 0)
                throw ParseError("expected word:weight, got '" + fields[i] + "'", line_no);
            std::string word = fields[i].substr(0, colon);
            char* end = nullptr;
            double weight = std::strtod(fields[i].c_str() + colon + 1, &end);
            if (end == fields[i].c_str() + colon + 1 || *end != '\0')
                throw ParseError("bad seed weight in '" + fields[i] + "'", line_no);
            entries.emplace_back(std::move(word), weight);
        }
        out.aspect_names.push_back(aspect);
        out.seeds[aspect] = std::move(entries);
    }
    out.validate(table);
    return out;
}

}  // namespace opsum
