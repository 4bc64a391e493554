"""Topic-cluster extractive summarization.

Documents are cleaned into lemma token streams, a collapsed-Gibbs LDA model
discovers latent topics, each sentence joins its dominant topic's cluster,
TextRank extracts the central sentences of every cluster, and the merged
selections form the summary. ROUGE variants score the output against
reference summaries.
"""

from .cleaning import (CleanedDoc, CleaningContext, PhraseModel, SentenceGroup,
                       apply_phrases, clean_document, learn_phrases,
                       lemmatize_filter, load_stopwords, segment_sentences,
                       strip_and_tokenize)
from .clustering import (SentenceAssignment, TopicClusterSet, assign_sentences,
                         build_clusters)
from .dataset import ArticlePair, CorpusManifest, ingest_csv, write_split
from .errors import (ConfigurationError, EmptyCorpusError, EmptyVocabularyError,
                     IntegrityError, PipelineError, TopicSumError)
from .lda import (LdaConfig, LdaModel, TopicReport, dominant_topic, infer_theta,
                  perplexity, train, umass_coherence)
from .pipeline import (PipelineConfig, RunReport, lead3_baseline,
                       random_baseline, report_table, run_pipeline)
from .rouge import (EvalTokenization, RougeScore, aggregate, rouge_l, rouge_n,
                    rouge_s, rouge_su, rouge_w)
from .textrank import (ExtractiveSummary, SummaryContext, TextRankConfig,
                       assemble_summary, sentence_vectors, similarity_matrix,
                       summarize_cluster, textrank_scores)
from .vocabulary import BowCorpus, TokenDictionary, build_dictionary, to_bow

__version__ = "0.1.0"

__all__ = [
    "ArticlePair", "BowCorpus", "CleanedDoc", "CleaningContext",
    "ConfigurationError", "CorpusManifest", "EmptyCorpusError",
    "EmptyVocabularyError", "EvalTokenization", "ExtractiveSummary",
    "IntegrityError", "LdaConfig", "LdaModel", "PhraseModel", "PipelineConfig",
    "PipelineError", "RougeScore", "RunReport", "SentenceAssignment",
    "SentenceGroup", "SummaryContext", "TextRankConfig", "TokenDictionary",
    "TopicClusterSet", "TopicReport", "TopicSumError", "aggregate",
    "apply_phrases", "assemble_summary", "assign_sentences", "build_clusters",
    "build_dictionary", "clean_document", "dominant_topic", "infer_theta",
    "ingest_csv", "lead3_baseline", "learn_phrases", "lemmatize_filter",
    "load_stopwords", "perplexity", "random_baseline", "report_table",
    "rouge_l", "rouge_n", "rouge_s", "rouge_su", "rouge_w", "run_pipeline",
    "segment_sentences", "sentence_vectors", "similarity_matrix",
    "strip_and_tokenize", "summarize_cluster", "textrank_scores", "to_bow",
    "train", "umass_coherence", "write_split",
]
