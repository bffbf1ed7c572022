"""Target-based aspect and opinion word extraction with lifelong PU learning.

Stage one groups a target's related words (t-words) by nearest neighbors in a
skip-gram space; stage two separates them into aspect and opinion words with a
PU classifier whose positives grow from knowledge retained across domains.
"""

from .corpus import Document, Vocabulary, build_vocabulary, read_corpus, tokenize, write_corpus
from .embeddings import (
    DegenerateCorpusError,
    EmbeddingFormatError,
    EmbeddingMatrix,
    SkipGramConfig,
    UnknownWordError,
    load_embeddings,
    save_embeddings,
    train_skipgram,
)
from .evaluation import (
    ComparisonReport,
    InsufficientLabelsError,
    LabeledTarget,
    acc_at_n,
    compare_variants,
    prepare_benchmark,
    read_gold,
    read_predictions,
    write_labels,
)
from .knowledge import (
    DuplicateDomainError,
    KnowledgeBase,
    KnowledgeRecord,
    ReliableKnowledge,
    load_kb,
    mine_reliable,
    retain,
    save_kb,
)
from .lpu import (
    DisentangleResult,
    Label,
    LpuConfig,
    Variant,
    accumulate,
    disentangle,
    disentangle_result,
    reliable_opinion,
    run_lpu,
)
from .pu import (
    LabelSplit,
    Lexicon,
    NoPositiveSeedsError,
    PuClassifier,
    PuOptions,
    TrainingError,
    label_split,
    load_lexicon,
    predict_positive,
    train_pu,
)
from .semantics import NeighborTable, TargetQueryResult, UnknownTargetError, build_neighbor_table, query_target
from .synthetic import SyntheticBenchmark, SyntheticSpec, generate_synthetic, write_benchmark

__version__ = "0.1.0"
