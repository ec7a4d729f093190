"""Coverage-driven selection of translation data to annotate next.

Pick the fragments of an untranslated corpus whose annotation grows n-gram
coverage fastest, simulate strategies against a parallel-corpus oracle,
account for annotation costs in sentences/words/seconds/dollars, and run a
small service that feeds highlighted-trigger tasks to human annotators.
"""

from .bleu import BleuResult, bleu, corpus_bleu
from .corpus import (
    CorpusFormatError,
    DictionaryEntry,
    NGram,
    ParallelCorpus,
    Sentence,
    extract_ngrams,
    load_dictionary,
    load_parallel_corpus,
    load_source_corpus,
    save_parallel_corpus,
    subgrams,
    tokenize,
)
from .coverage import (
    CoverageIndex,
    CoverageStats,
    build_frequency_table,
    initialize_coverage,
    load_snapshot,
    save_snapshot,
    sorted_ngrams,
)
from .selection import (
    AnnotationTask,
    ConsistencyError,
    Pool,
    Selection,
    Selector,
    Strategy,
    hng_task_stream,
    make_hng_task,
)
from .simulate import (
    ComposedLexicon,
    LearningCurve,
    OracleAnnotator,
    OracleMissError,
    SimulationConfig,
    SimulationResult,
    emit_curve,
    load_curve,
    run_simulation,
)
from .translator import MemorizingTranslator, train

__version__ = "0.1.0"

__all__ = [
    "AnnotationTask",
    "BleuResult",
    "ComposedLexicon",
    "ConsistencyError",
    "CorpusFormatError",
    "CoverageIndex",
    "CoverageStats",
    "DictionaryEntry",
    "LearningCurve",
    "MemorizingTranslator",
    "NGram",
    "OracleAnnotator",
    "OracleMissError",
    "ParallelCorpus",
    "Pool",
    "Selection",
    "Selector",
    "Sentence",
    "SimulationConfig",
    "SimulationResult",
    "Strategy",
    "bleu",
    "build_frequency_table",
    "corpus_bleu",
    "emit_curve",
    "extract_ngrams",
    "hng_task_stream",
    "initialize_coverage",
    "load_curve",
    "load_dictionary",
    "load_parallel_corpus",
    "load_snapshot",
    "load_source_corpus",
    "make_hng_task",
    "run_simulation",
    "save_parallel_corpus",
    "save_snapshot",
    "sorted_ngrams",
    "subgrams",
    "tokenize",
    "train",
]
