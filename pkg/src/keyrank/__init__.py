"""keyrank: keyphrase extraction and diversity-aware top-N ranking.

The pipeline tokenizes a document, tags it with a coarse rule-based POS
tagger, chunks (ADJ)*(NOUN)+ spans into candidate keyphrases, embeds
candidates and document through a pluggable provider, and greedily
selects the top N phrases maximizing total relevance minus an
alpha-weighted pairwise-similarity penalty. A lazy-evaluation ranker
with identical output, an MMR comparator, IR/diversity metrics, corpus
tooling, and a CLI round out the package.
"""

from .config import ConfigError, RankConfig, RunSettings, validate_config
from .datasets import (CorpusFormatError, CorpusStats, corpus_stats,
                       load_corpus, save_corpus)
from .embedding import (DimensionMismatchError, EmbeddingTransportError,
                        HashEmbedding, RemoteEmbedding, embed_batch,
                        embed_document, hash_embed, project)
from .extraction import (TaggedToken, chunk_noun_phrases, extract_candidates,
                         normalize_and_dedup, normalize_phrase, pos_tag,
                         tokenize)
from .kernels import active_backend_name, available_backends
from .metrics import (DocumentEval, EvalReport, aggregate_evals,
                      intra_list_distance, match_keyphrases, prf_at_n,
                      subtopic_recall)
from .model import (Candidate, Document, RankedSelection, SelectionItem,
                    as_embedding)
from .objective import (ScoredInstance, cosine, marginal_gain,
                        objective_value, score_instance)
from .pipeline import DocumentRun, build_provider, rank_document
from .ranker import greedy_rank, lazy_greedy_rank, mmr_rank

__version__ = "0.1.0"

__all__ = [
    "Candidate", "ConfigError", "CorpusFormatError", "CorpusStats",
    "DimensionMismatchError", "Document", "DocumentEval", "DocumentRun",
    "EmbeddingTransportError", "EvalReport", "HashEmbedding",
    "RankConfig", "RankedSelection", "RemoteEmbedding", "RunSettings",
    "ScoredInstance", "SelectionItem", "TaggedToken",
    "active_backend_name", "aggregate_evals", "as_embedding",
    "available_backends", "build_provider", "chunk_noun_phrases",
    "corpus_stats", "cosine", "embed_batch", "embed_document",
    "extract_candidates", "greedy_rank", "hash_embed",
    "intra_list_distance", "lazy_greedy_rank", "load_corpus",
    "marginal_gain", "match_keyphrases", "mmr_rank", "normalize_and_dedup",
    "normalize_phrase", "objective_value", "pos_tag", "prf_at_n",
    "project", "rank_document", "save_corpus", "score_instance",
    "subtopic_recall", "tokenize", "validate_config",
]
