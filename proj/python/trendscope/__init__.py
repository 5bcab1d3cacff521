"""Python access to the trendscope native core."""

from ._trendscope import (  # noqa: F401
    ArimaModel,
    ConfigError,
    Error,
    IncompleteManifest,
    MissingUpstream,
    TooShort,
    __version__,
    acf,
    aic_value,
    bic_value,
    bigram_top_words,
    char_ngrams,
    coherence,
    cosine,
    difference,
    edit_distance,
    evaluate_oos,
    fit_arima,
    fit_hdp,
    fit_lda,
    forecast,
    grid_search_arima,
    kmeans_cosine,
    moving_average,
    pacf,
    preprocess_texts,
    rake,
    report,
    run_pipeline,
    run_stage,
    symspell_lookup,
)
