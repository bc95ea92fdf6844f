#include "opsum/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "opsum/errors.hpp"

namespace opsum {

using nlohmann::json;

namespace {

const char* kDefaultStopwords[] = {
    "a",       "about",   "above",  "after",   "again",   "against", "all",    "am",
    "an",      "and",     "any",    "are",     "as",      "at",      "be",     "because",
    "been",    "before",  "being",  "below",   "between", "both",    "but",    "by",
    "can",     "could",   "did",    "do",      "does",    "doing",   "down",   "during",
    "each",    "few",     "for",    "from",    "further", "had",     "has",    "have",
    "having",  "he",      "her",    "here",    "hers",    "herself", "him",    "himself",
    "his",     "how",     "i",      "if",      "in",      "into",    "is",     "it",
    "its",     "itself",  "just",   "me",      "more",    "most",    "my",     "myself",
    "no",      "nor",     "not",    "now",     "of",      "off",     "on",     "once",
    "only",    "or",      "other",  "our",     "ours",    "ourselves", "out",  "over",
    "own",     "s",       "same",   "she",     "should",  "so",      "some",   "such",
    "t",       "than",    "that",   "the",     "their",   "theirs",  "them",   "themselves",
    "then",    "there",   "these",  "they",    "this",    "those",   "through", "to",
    "too",     "under",   "until",  "up",      "very",    "was",     "we",     "were",
    "what",    "when",    "where",  "which",   "while",   "who",     "whom",   "why",
    "will",    "with",    "you",    "your",    "yours",   "yourself", "yourselves",
};

json parse_json_line(const std::string& line, long line_no) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) throw ParseError("invalid JSON", line_no);
    return j;
}

std::string lower_ascii(const std::string& s) {
    std::string out = s;
    for (char& c : out)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace

std::size_t Corpus::segment_count() const {
    std::size_t n = 0;
    for (const Review& r : reviews) n += r.segments.size();
    return n;
}

const Segment* Corpus::find_segment(const std::string& segment_id) const {
    auto it = segment_index_.find(segment_id);
    if (it == segment_index_.end()) return nullptr;
    return &reviews[it->second.first].segments[it->second.second];
}

void Corpus::rebuild_index() {
    products.clear();
    segment_index_.clear();
    for (std::size_t i = 0; i < reviews.size(); ++i) {
        products[reviews[i].product_id].push_back(i);
        for (std::size_t j = 0; j < reviews[i].segments.size(); ++j)
            segment_index_[reviews[i].segments[j].segment_id] = {i, j};
    }
}

std::vector<std::string> normalize_tokens(const std::string& text, const StopwordSet& stopwords) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty() && !stopwords.contains(cur)) out.push_back(cur);
        cur.clear();
    };
    for (unsigned char c : text) {
        if (c >= 0x80) {
            cur.push_back(static_cast<char>(c));
        } else if (std::isalnum(c)) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else {
            flush();
        }
    }
    flush();
    return out;
}

const StopwordSet& default_stopwords() {
    static const StopwordSet set = [] {
        StopwordSet s;
        for (const char* w : kDefaultStopwords) s.insert(w);
        return s;
    }();
    return set;
}

StopwordSet load_stopwords(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open stopword file: " + path);
    StopwordSet set;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (!line.empty()) set.insert(lower_ascii(line));
    }
    return set;
}

Corpus load_corpus(const std::string& path, const std::string& domain_id,
                   const StopwordSet& stopwords) {
    if (domain_id.empty()) throw ValidationError("domain_id must be nonempty");
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open review file: " + path);

    Corpus corpus;
    corpus.domain_id = domain_id;
    std::unordered_set<std::string> seen_segments;
    std::unordered_set<std::string> seen_reviews;

    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j = parse_json_line(line, line_no);
        if (!j.is_object() || !j.contains("review_id") || !j.contains("product_id") ||
            !j.contains("rating") || !j.contains("segments"))
            throw ParseError("review record missing required field", line_no);

        Review review;
        review.review_id = j["review_id"].get<std::string>();
        review.product_id = j["product_id"].get<std::string>();
        if (!j["rating"].is_number_integer())
            throw ParseError("rating must be an integer", line_no);
        review.rating = j["rating"].get<int>();
        if (review.rating < 1 || review.rating > 5)
            throw ValidationError("review " + review.review_id + ": rating " +
                                  std::to_string(review.rating) + " outside [1,5]");
        if (j.contains("domain") && j["domain"].get<std::string>() != domain_id)
            throw ValidationError("review " + review.review_id + ": domain '" +
                                  j["domain"].get<std::string>() + "' does not match corpus domain '" +
                                  domain_id + "'");
        if (!seen_reviews.insert(review.review_id).second)
            throw ValidationError("duplicate review_id: " + review.review_id);

        if (!j["segments"].is_array() || j["segments"].empty())
            throw ValidationError("review " + review.review_id + ": segments must be nonempty");
        for (const json& js : j["segments"]) {
            Segment seg;
            if (!js.contains("segment_id") || !js.contains("text"))
                throw ParseError("segment record missing required field", line_no);
            seg.segment_id = js["segment_id"].get<std::string>();
            seg.text = js["text"].get<std::string>();
            seg.review_id = review.review_id;
            if (js.contains("tokens")) {
                // pre-tokenized input: keep tokens as given, minus case and stopwords
                for (const json& jt : js["tokens"]) {
                    std::string t = lower_ascii(jt.get<std::string>());
                    if (!t.empty() && !stopwords.contains(t)) seg.tokens.push_back(t);
                }
            } else {
                seg.tokens = normalize_tokens(seg.text, stopwords);
            }
            if (!seen_segments.insert(seg.segment_id).second)
                throw ValidationError("duplicate segment_id: " + seg.segment_id);
            review.segments.push_back(std::move(seg));
        }
        corpus.reviews.push_back(std::move(review));
    }
    corpus.rebuild_index();
    return corpus;
}

void save_corpus(const Corpus& corpus, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write review file: " + path);
    for (const Review& r : corpus.reviews) {
        json j;
        j["review_id"] = r.review_id;
        j["product_id"] = r.product_id;
        j["rating"] = r.rating;
        j["domain"] = corpus.domain_id;
        json segs = json::array();
        for (const Segment& s : r.segments) {
            json js;
            js["segment_id"] = s.segment_id;
            js["text"] = s.text;
            js["tokens"] = s.tokens;
            segs.push_back(std::move(js));
        }
        j["segments"] = std::move(segs);
        out << j.dump() << '\n';
    }
}

std::optional<std::size_t> Vocabulary::id(const std::string& token) const {
    auto it = token_to_id_.find(token);
    if (it == token_to_id_.end()) return std::nullopt;
    return it->second;
}

std::size_t Vocabulary::document_frequency(const std::string& token) const {
    auto i = id(token);
    return i ? df_[*i] : 0;
}

Vocabulary build_vocabulary(const Corpus& corpus, std::size_t min_count) {
    if (corpus.reviews.empty()) throw ValidationError("cannot build vocabulary from empty corpus");
    if (min_count == 0) min_count = 1;

    std::map<std::string, std::size_t> counts;  // ordered -> dense ids are lexicographic
    std::map<std::string, std::size_t> df;
    std::size_t total_segments = 0;
    for (const Review& r : corpus.reviews) {
        for (const Segment& s : r.segments) {
            ++total_segments;
            std::unordered_set<std::string> uniq;
            for (const std::string& t : s.tokens) {
                ++counts[t];
                uniq.insert(t);
            }
            for (const std::string& t : uniq) ++df[t];
        }
    }

    Vocabulary v;
    v.total_segments_ = total_segments;
    for (const auto& [token, count] : counts) {
        if (count < min_count) continue;
        v.token_to_id_[token] = v.id_to_token_.size();
        v.id_to_token_.push_back(token);
        v.df_.push_back(df[token]);
    }
    return v;
}

AnnotationSet load_annotations(const std::string& path, const Corpus& corpus,
                               const std::vector<std::string>& inventory) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open annotation file: " + path);
    std::set<std::string> inv(inventory.begin(), inventory.end());

    AnnotationSet out;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j = parse_json_line(line, line_no);
        if (!j.contains("kind")) throw ParseError("annotation record missing 'kind'", line_no);
        const std::string kind = j["kind"].get<std::string>();

        if (kind == "aspect") {
            AspectAnnotation a;
            a.segment_id = j["segment_id"].get<std::string>();
            if (!corpus.find_segment(a.segment_id))
                throw ValidationError("aspect annotation references unknown segment: " +
                                      a.segment_id);
            for (const json& ja : j["aspects"]) {
                std::string name = ja.get<std::string>();
                if (!inv.empty() && !inv.contains(name))
                    throw ValidationError("aspect '" + name + "' not in inventory (segment " +
                                          a.segment_id + ")");
                a.aspects.insert(std::move(name));
            }
            if (a.aspects.empty())
                throw ValidationError("aspect annotation with empty aspect set: " + a.segment_id);
            out.aspects.push_back(std::move(a));
        } else if (kind == "salience") {
            SalienceAnnotation s;
            s.segment_id = j["segment_id"].get<std::string>();
            if (!corpus.find_segment(s.segment_id))
                throw ValidationError("salience annotation references unknown segment: " +
                                      s.segment_id);
            for (const auto& [annotator, value] : j["labels"].items()) {
                int v = value.get<int>();
                if (v != 0 && v != 1)
                    throw ValidationError("salience label must be 0/1 (segment " + s.segment_id +
                                          ")");
                s.labels[annotator] = v;
            }
            if (s.labels.empty())
                throw ValidationError("salience annotation with no annotators: " + s.segment_id);
            out.salience.push_back(std::move(s));
        } else if (kind == "summary") {
            GoldSummary g;
            g.product_id = j["product_id"].get<std::string>();
            g.annotator_id = j["annotator_id"].get<std::string>();
            std::size_t words = 0;
            for (const json& js : j["segment_ids"]) {
                std::string sid = js.get<std::string>();
                const Segment* seg = corpus.find_segment(sid);
                if (!seg)
                    throw ValidationError("gold summary references unknown segment: " + sid);
                words += word_count(seg->text);
                g.summary_segment_ids.push_back(std::move(sid));
            }
            if (words > 100)
                out.warnings.push_back("gold summary for product " + g.product_id +
                                       " by " + g.annotator_id + " exceeds 100 words (" +
                                       std::to_string(words) + ")");
            out.summaries.push_back(std::move(g));
        } else {
            throw ParseError("unknown annotation kind: " + kind, line_no);
        }
    }
    return out;
}

std::size_t word_count(const std::string& text) {
    std::size_t n = 0;
    bool in_word = false;
    for (unsigned char c : text) {
        bool space = std::isspace(c) != 0;
        if (!space && !in_word) ++n;
        in_word = !space;
    }
    return n;
}

}  // namespace opsum
