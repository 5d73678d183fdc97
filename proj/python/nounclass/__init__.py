"""Learn lexical semantic noun classes from PoS-tagged corpora."""

from ._nounclass import (
    Corpus,
    CrossValidation,
    CueSet,
    Dataset,
    DecisionTree,
    Error,
    GoldStandard,
    ParseError,
    Prediction,
    ThresholdReport,
    TrainParams,
    builtin_cueset,
    cross_validate,
    cue_frequencies,
    extract_dataset,
    parse_corpus,
    parse_cueset,
    parse_dataset,
    parse_gold,
    parse_model,
    published_rates,
    read_corpus,
    read_cueset,
    read_gold,
    synth_corpus,
    train,
)

__all__ = [
    "Corpus",
    "CrossValidation",
    "CueSet",
    "Dataset",
    "DecisionTree",
    "Error",
    "GoldStandard",
    "ParseError",
    "Prediction",
    "ThresholdReport",
    "TrainParams",
    "builtin_cueset",
    "cross_validate",
    "cue_frequencies",
    "extract_dataset",
    "parse_corpus",
    "parse_cueset",
    "parse_dataset",
    "parse_gold",
    "parse_model",
    "published_rates",
    "read_corpus",
    "read_cueset",
    "read_gold",
    "synth_corpus",
    "train",
]
