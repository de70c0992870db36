"""Fuzzy ontology embeddings and concept queries."""

from ._core import (
    EmbeddingMatrix,
    FuzzyvisError,
    OntologyGraph,
    Query,
    VectorIndex,
    answer,
    cosine,
    evaluate,
    export_embedding,
    fold_tconorm,
    fold_tnorm,
    format_expression,
    generate,
    import_embedding,
    leaf_distance,
    metadata,
    negate,
    neighborhood,
    parse_expression,
    parse_json,
    parse_obo,
    query_from_json,
    search_labels,
    tconorm,
    tnorm,
)

__all__ = [name for name in dir() if not name.startswith("_")]
