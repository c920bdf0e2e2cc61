"""aspectnews: structure historical news archives by person roles and
role aspects learned from Wikipedia structure."""

__version__ = "0.1.0"

from .classifier import (
    NEGATIVE,
    EvalReport,
    NearestCentroidTextClassifier,
    TrainedAspectModel,
    TrainingSet,
    build_training_set,
    classify,
    evaluate,
    evaluate_predictions,
    train,
)
from .clustering import SectionTitleCluster, TitleClusterer, cluster_titles, cosine
from .embedding import (
    EmbeddingProvider,
    FileBackedEmbedder,
    TrigramHashEmbedder,
    embed_section,
    split_sentences,
    title_group_vector,
)
from .mining import (
    RoleAspectSchema,
    count_supports,
    mine_aspects,
    select_roles,
    strip_role_suffix,
)
from .models import (
    ClassifiedSnippet,
    NewsArticle,
    PersonPage,
    PersonProfile,
    Section,
    Snippet,
)
from .news import (
    classify_snippets,
    extract_snippets,
    filter_article,
    make_fragment,
    partial_names,
    rank_top,
)
from .readability import (
    ReadabilityReport,
    count_syllables,
    dale_chall,
    flesch,
    reading_time,
)
from .store import BuildConfig, BuildError, CorpusStore, build_corpus
from .summarize import AspectSummary, summarize
from .wiki import (
    OccupationTaxonomy,
    expand_roles,
    filter_pages,
    load_taxonomy,
    parse_pages,
)

__all__ = [
    "__version__",
    "NEGATIVE",
    "EvalReport",
    "NearestCentroidTextClassifier",
    "TrainedAspectModel",
    "TrainingSet",
    "build_training_set",
    "classify",
    "evaluate",
    "evaluate_predictions",
    "train",
    "SectionTitleCluster",
    "TitleClusterer",
    "cluster_titles",
    "cosine",
    "EmbeddingProvider",
    "FileBackedEmbedder",
    "TrigramHashEmbedder",
    "embed_section",
    "split_sentences",
    "title_group_vector",
    "RoleAspectSchema",
    "count_supports",
    "mine_aspects",
    "select_roles",
    "strip_role_suffix",
    "ClassifiedSnippet",
    "NewsArticle",
    "PersonPage",
    "PersonProfile",
    "Section",
    "Snippet",
    "classify_snippets",
    "extract_snippets",
    "filter_article",
    "make_fragment",
    "partial_names",
    "rank_top",
    "ReadabilityReport",
    "count_syllables",
    "dale_chall",
    "flesch",
    "reading_time",
    "BuildConfig",
    "BuildError",
    "CorpusStore",
    "build_corpus",
    "AspectSummary",
    "summarize",
    "OccupationTaxonomy",
    "expand_roles",
    "filter_pages",
    "load_taxonomy",
    "parse_pages",
]
