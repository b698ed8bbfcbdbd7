"""Multi-label vaccine-concern classification toolkit.

C++ core exposed through the compiled ``vaxkit._core`` extension: the
12-label scheme, corpus CSV loading, encoder + dense-head training and
prediction, zero-shot prompt building and response parsing, macro-F1 /
Jaccard evaluation, and run-file serialization.

Real transformer encoders plug in by subclassing :class:`EncoderBackend`
and implementing ``spec()`` and ``encode(text)``.
"""

from vaxkit._core import (  # noqa: F401
    CorpusSummary,
    CsvSchema,
    DecodingParams,
    EncoderBackend,
    EncoderBackendSpec,
    EpochLoss,
    EvaluationReport,
    JaccardVariant,
    LabelMeta,
    MacroConvention,
    ParseMode,
    PerLabelStats,
    PredictionPair,
    PromptBundle,
    PromptTemplate,
    RunFile,
    TrainingConfig,
    TweetRecord,
    VaxkitError,
    __version__,
    build_prompt,
    canonical_labels,
    default_label_metas,
    evaluate,
    from_multi_hot,
    jaccard_similarity,
    known_backend_spec,
    load_csv,
    load_label_metas,
    load_state,
    macro_f1,
    make_backend,
    make_backend_for,
    normalize_prediction,
    parse_label_string,
    parse_response,
    predict,
    predict_probabilities,
    read_run,
    report_table,
    save_state,
    serialize_label_set,
    summarize,
    summary_table,
    threshold_labels,
    to_multi_hot,
    train,
    write_csv,
    write_run,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
