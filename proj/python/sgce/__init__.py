"""Semantic-graph counterfactual explanations."""

import json

from ._sgce import (
    CostModel,
    Dataset,
    EmbeddingModel,
    Error,
    Graph,
    Taxonomy,
    WordVectors,
    bipartite_ged,
    embed_all,
    exact_ged,
    ged_matrix,
    load_taxonomy,
    parse_dataset,
    pyramid_gram,
    rank_candidates,
    retrieve,
    run_cli,
    synthetic_corpus,
    train,
)
from ._sgce import evaluate as _evaluate

__version__ = "0.1.0"


def evaluate(dataset, report, ged, costs, ks=(1, 2, 4)):
    """Ranking metrics and edit statistics for a retrieval report (dict or JSON text)."""
    text = report if isinstance(report, str) else json.dumps(report)
    return _evaluate(dataset, text, ged, costs, list(ks))


__all__ = [
    "CostModel",
    "Dataset",
    "EmbeddingModel",
    "Error",
    "Graph",
    "Taxonomy",
    "WordVectors",
    "bipartite_ged",
    "embed_all",
    "evaluate",
    "exact_ged",
    "ged_matrix",
    "load_taxonomy",
    "parse_dataset",
    "pyramid_gram",
    "rank_candidates",
    "retrieve",
    "run_cli",
    "synthetic_corpus",
    "train",
]
