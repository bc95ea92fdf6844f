#include "opsum/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "opsum/errors.hpp"

namespace opsum {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0')
        throw ConfigError("config key '" + key + "': expected unsigned integer, got '" + value +
                          "'");
    return v;
}

double parse_double(const std::string& key, const std::string& value) {
    char* end = nullptr;
    double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0')
        throw ConfigError("config key '" + key + "': expected number, got '" + value + "'");
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("config key '" + key + "': expected boolean, got '" + value + "'");
}

}  // namespace

PipelineConfig parse_config(const std::string& text) {
    PipelineConfig c;
    std::istringstream in(text);
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("config line is not 'key = value'", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "seed") c.seed = parse_uint(key, value);
        else if (key == "out_dir") c.out_dir = value;
        else if (key == "corpus.reviews") c.corpus_reviews = value;
        else if (key == "corpus.domain") c.corpus_domain = value;
        else if (key == "corpus.stopwords") c.corpus_stopwords = value;
        else if (key == "corpus.min_count") c.corpus_min_count = parse_uint(key, value);
        else if (key == "corpus.annotations") c.corpus_annotations = value;
        else if (key == "corpus.out_of_domain") {
            for (const std::string& item : split_list(value)) {
                std::size_t sep = item.find('=');
                if (sep == std::string::npos)
                    throw ConfigError("corpus.out_of_domain entries are domain=path, got '" +
                                      item + "'");
                c.out_of_domain.emplace_back(trim(item.substr(0, sep)), trim(item.substr(sep + 1)));
            }
        } else if (key == "aspects.names") c.aspect_names = split_list(value);
        else if (key == "aspects.general") c.general_aspect = value;
        else if (key == "embeddings.path") c.embeddings_path = value;
        else if (key == "seeds.path") c.seeds_path = value;
        else if (key == "seeds.count") c.seeds_count = parse_uint(key, value);
        else if (key == "aspect.variant") c.aspect_variant = value;
        else if (key == "aspect.count") c.aspect_count = parse_uint(key, value);
        else if (key == "aspect.negatives") c.aspect_negatives = parse_uint(key, value);
        else if (key == "aspect.lambda") c.aspect_lambda = parse_double(key, value);
        else if (key == "aspect.learning_rate") c.aspect_learning_rate = parse_double(key, value);
        else if (key == "aspect.batch_size") c.aspect_batch_size = parse_uint(key, value);
        else if (key == "aspect.epochs") c.aspect_epochs = parse_uint(key, value);
        else if (key == "aspect.checkpoint") c.aspect_checkpoint = value;
        else if (key == "mil.classes") c.mil_classes = parse_uint(key, value);
        else if (key == "mil.windows") {
            c.mil_windows.clear();
            for (const std::string& w : split_list(value))
                c.mil_windows.push_back(parse_uint(key, w));
        } else if (key == "mil.feature_maps") c.mil_feature_maps = parse_uint(key, value);
        else if (key == "mil.attention_hidden") c.mil_attention_hidden = parse_uint(key, value);
        else if (key == "mil.learning_rate") c.mil_learning_rate = parse_double(key, value);
        else if (key == "mil.batch_size") c.mil_batch_size = parse_uint(key, value);
        else if (key == "mil.epochs") c.mil_epochs = parse_uint(key, value);
        else if (key == "mil.checkpoint") c.mil_checkpoint = value;
        else if (key == "polarity.backend") c.polarity_backend = value;
        else if (key == "summary.system") c.summary_system = value;
        else if (key == "summary.budget") c.summary_budget = parse_uint(key, value);
        else if (key == "summary.threshold") c.summary_threshold = parse_double(key, value);
        else if (key == "eval.predictions") c.eval_predictions = value;
        else if (key == "eval.summaries") c.eval_summaries = value;
        else if (key == "eval.aspects") c.eval_aspects = parse_bool(key, value);
        else if (key == "eval.salience") c.eval_salience = parse_bool(key, value);
        else if (key == "eval.rouge") c.eval_rouge = parse_bool(key, value);
        else if (key == "eval.interannotator") c.eval_interannotator = parse_bool(key, value);
        else throw ConfigError("unknown config key: " + key);
    }

    if (c.polarity_backend != "mil" && c.polarity_backend != "lexicon")
        throw ConfigError("polarity.backend must be mil or lexicon");
    if (c.summary_system != "full" && c.summary_system != "no-redundancy" &&
        c.summary_system != "random" && c.summary_system != "lead")
        throw ConfigError("summary.system must be full, no-redundancy, random or lead");
    return c;
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

}  // namespace opsum
