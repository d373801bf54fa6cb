"""layerstack: staged corpus analysis.

A small numpy/scipy library that walks text corpora up a ladder of
abstractions: byte and token entropies, document/term joint information,
leave-one-out correlation ranking, cluster-and-reselect aggregation, a
crowd-error diagnostic over the clusters, and Dempster-Shafer belief
updates over keywords. Everything is deterministic for fixed seeds and
inputs.
"""

from .belief import (
    Frame,
    MassFunction,
    belief,
    combine,
    keyword_belief_update,
    make_mass,
    plausibility,
    vacuous_mass,
)
from .corpus import (
    Corpus,
    Document,
    ScatterPoint,
    TokenizerConfig,
    frequency_scatter,
    ingest_corpus,
    load_stop_words,
    resolve_sources,
    term_frequencies,
    tokenize,
    top_k_terms,
)
from .infotheory import (
    JointDistribution,
    MessageEnsemble,
    TokenDistribution,
    bitstream_entropy,
    hartley_entropy,
    joint_entropy,
    residual_entropy,
    shannon_entropy,
)
from .intelligence import (
    AggregationResult,
    AggregationRound,
    AggregationWarning,
    Clustering,
    DocVector,
    EntropicState,
    aggregate_corpus,
    doc_vector,
    entropic_gain,
    iterate_aggregation,
    kmeans,
    select_representatives,
)
from .knowledge import (
    CorrelationResult,
    EventSpace,
    RankingWarning,
    correlate_document,
    correlation_p_value,
    justification_score,
    pearson_r,
    rank_documents,
)
from .pipeline import (
    LAYERS,
    PipelineError,
    PipelineWarning,
    RunConfig,
    RunReport,
    emit_plot_data,
    emit_tables,
    run_pipeline,
    write_report,
)
from .stopwords import ENGLISH_STOP_WORDS
from .synthetic import synthetic_corpus, topic_distributions, write_corpus
from .wisdom import (
    CrowdDecomposition,
    CrowdPrediction,
    aggregate_round_quality,
    crowd_decomposition,
)

__version__ = "0.1.0"

__all__ = [
    "AggregationResult",
    "AggregationRound",
    "AggregationWarning",
    "Clustering",
    "Corpus",
    "CorrelationResult",
    "CrowdDecomposition",
    "CrowdPrediction",
    "DocVector",
    "Document",
    "ENGLISH_STOP_WORDS",
    "EntropicState",
    "EventSpace",
    "Frame",
    "JointDistribution",
    "LAYERS",
    "MassFunction",
    "MessageEnsemble",
    "PipelineError",
    "PipelineWarning",
    "RankingWarning",
    "RunConfig",
    "RunReport",
    "ScatterPoint",
    "TokenDistribution",
    "TokenizerConfig",
    "aggregate_corpus",
    "aggregate_round_quality",
    "belief",
    "bitstream_entropy",
    "combine",
    "correlate_document",
    "correlation_p_value",
    "crowd_decomposition",
    "doc_vector",
    "emit_plot_data",
    "emit_tables",
    "entropic_gain",
    "frequency_scatter",
    "hartley_entropy",
    "ingest_corpus",
    "iterate_aggregation",
    "joint_entropy",
    "justification_score",
    "keyword_belief_update",
    "kmeans",
    "load_stop_words",
    "make_mass",
    "pearson_r",
    "plausibility",
    "rank_documents",
    "resolve_sources",
    "residual_entropy",
    "run_pipeline",
    "select_representatives",
    "shannon_entropy",
    "synthetic_corpus",
    "term_frequencies",
    "tokenize",
    "top_k_terms",
    "topic_distributions",
    "vacuous_mass",
    "write_corpus",
    "write_report",
]
