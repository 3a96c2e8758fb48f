"""Frequency-filtered metadescriptors for concept identification in data streams."""

from ._core import (
    FfmError,
    ced_describe,
    ced_metafeatures,
    dft_real_half,
    external_scores,
    generate_stream,
    identify_concept_count,
    idft_single_component,
    internal_scores,
    kmeans,
    metadescribe,
    normalize,
    paired_t_test,
    pca_describe,
    render_chunk_image,
)

__all__ = [
    "FfmError",
    "ced_describe",
    "ced_metafeatures",
    "dft_real_half",
    "external_scores",
    "generate_stream",
    "identify_concept_count",
    "idft_single_component",
    "internal_scores",
    "kmeans",
    "metadescribe",
    "normalize",
    "paired_t_test",
    "pca_describe",
    "render_chunk_image",
]
