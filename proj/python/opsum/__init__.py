"""Weakly-supervised aspect-based opinion summarization.

The heavy lifting lives in the C++ core; this package re-exports the main
operations. Training and the full pipeline run through the `opsum` CLI.
"""

from ._opsum import (
    Corpus,
    EmbeddingTable,
    aspect_f1_micro,
    average_precision,
    cosine,
    default_stopwords,
    kmeans,
    load_corpus,
    normalize_tokens,
    polarity,
    precision_at_k,
    rouge_l,
    rouge_n,
    rouge_tokenize,
    salience,
    sentiment_class_weights,
)

__all__ = [
    "Corpus",
    "EmbeddingTable",
    "aspect_f1_micro",
    "average_precision",
    "cosine",
    "default_stopwords",
    "kmeans",
    "load_corpus",
    "normalize_tokens",
    "polarity",
    "precision_at_k",
    "rouge_l",
    "rouge_n",
    "rouge_tokenize",
    "salience",
    "sentiment_class_weights",
]
