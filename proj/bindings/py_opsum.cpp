#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "opsum/aspect_model.hpp"
#include "opsum/corpus.hpp"
#include "opsum/embeddings.hpp"
#include "opsum/errors.hpp"
#include "opsum/evaluation.hpp"
#include "opsum/math.hpp"
#include "opsum/polarity.hpp"
#include "opsum/summarizer.hpp"

namespace py = pybind11;

namespace {

opsum::StopwordSet to_stopword_set(const std::vector<std::string>& words) {
    return opsum::StopwordSet(words.begin(), words.end());
}

}  // namespace

PYBIND11_MODULE(_opsum, m) {
    m.doc() = "weakly-supervised opinion summarization core";

    py::register_exception<opsum::ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<opsum::ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<opsum::ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def(
        "normalize_tokens",
        [](const std::string& text, const std::optional<std::vector<std::string>>& stopwords) {
            if (stopwords) return opsum::normalize_tokens(text, to_stopword_set(*stopwords));
            return opsum::normalize_tokens(text, opsum::default_stopwords());
        },
        py::arg("text"), py::arg("stopwords") = py::none(),
        "lowercase, strip punctuation and drop stopwords (bundled English list by default)");

    m.def("default_stopwords", [] {
        const auto& set = opsum::default_stopwords();
        std::vector<std::string> out(set.begin(), set.end());
        std::sort(out.begin(), out.end());
        return out;
    });

    m.def(
        "cosine",
        [](const opsum::Vec& u, const opsum::Vec& v) { return opsum::cosine(u, v); },
        py::arg("u"), py::arg("v"));

    m.def("kmeans", &opsum::kmeans, py::arg("vectors"), py::arg("k"), py::arg("max_iters") = 100,
          py::arg("seed") = 1);

    m.def("salience", &opsum::salience, py::arg("aspect_probs"), py::arg("polarity"),
          py::arg("general_index"));

    m.def("sentiment_class_weights", &opsum::sentiment_class_weights, py::arg("classes"));
    m.def("polarity", &opsum::polarity, py::arg("sentiment_probs"), py::arg("class_weights"));

    m.def("rouge_n", &opsum::rouge_n, py::arg("candidate"), py::arg("references"), py::arg("n"));
    m.def("rouge_l", &opsum::rouge_l, py::arg("candidate"), py::arg("references"));
    m.def("rouge_tokenize", &opsum::rouge_tokenize, py::arg("text"));

    m.def(
        "average_precision",
        [](const std::vector<std::string>& ranking, const std::vector<std::string>& relevant) {
            return opsum::average_precision(
                ranking, std::set<std::string>(relevant.begin(), relevant.end()));
        },
        py::arg("ranking"), py::arg("relevant"));
    m.def(
        "precision_at_k",
        [](const std::vector<std::string>& ranking, const std::vector<std::string>& relevant,
           std::size_t k) {
            return opsum::precision_at_k(
                ranking, std::set<std::string>(relevant.begin(), relevant.end()), k);
        },
        py::arg("ranking"), py::arg("relevant"), py::arg("k") = 5);

    m.def(
        "aspect_f1_micro",
        [](const std::map<std::string, std::set<std::string>>& predictions,
           const std::map<std::string, std::set<std::string>>& gold) {
            std::vector<opsum::AspectAnnotation> annotations;
            for (const auto& [segment_id, aspects] : gold)
                annotations.push_back({segment_id, aspects});
            return opsum::aspect_f1_micro(predictions, annotations);
        },
        py::arg("predictions"), py::arg("gold"));

    py::class_<opsum::EmbeddingTable>(m, "EmbeddingTable")
        .def_static(
            "load", [](const std::string& path) { return opsum::load_embeddings(path); },
            py::arg("path"))
        .def_property_readonly("dim", &opsum::EmbeddingTable::dim)
        .def("__len__", &opsum::EmbeddingTable::size)
        .def("__contains__", &opsum::EmbeddingTable::contains)
        .def(
            "lookup",
            [](const opsum::EmbeddingTable& t, const std::string& word)
                -> std::optional<opsum::Vec> {
                auto v = t.lookup(word);
                if (!v) return std::nullopt;
                return opsum::Vec(v->begin(), v->end());
            },
            py::arg("word"))
        .def(
            "average",
            [](const opsum::EmbeddingTable& t, const std::vector<std::string>& tokens) {
                return opsum::average_vector(tokens, t);
            },
            py::arg("tokens"));

    py::class_<opsum::Corpus>(m, "Corpus")
        .def_property_readonly("domain_id",
                               [](const opsum::Corpus& c) { return c.domain_id; })
        .def_property_readonly("review_count",
                               [](const opsum::Corpus& c) { return c.reviews.size(); })
        .def_property_readonly("segment_count", &opsum::Corpus::segment_count)
        .def_property_readonly("product_ids", [](const opsum::Corpus& c) {
            std::vector<std::string> out;
            for (const auto& [pid, _] : c.products) out.push_back(pid);
            return out;
        });

    m.def(
        "load_corpus",
        [](const std::string& path, const std::string& domain,
           const std::optional<std::vector<std::string>>& stopwords) {
            if (stopwords) return opsum::load_corpus(path, domain, to_stopword_set(*stopwords));
            return opsum::load_corpus(path, domain);
        },
        py::arg("path"), py::arg("domain"), py::arg("stopwords") = py::none());
}
