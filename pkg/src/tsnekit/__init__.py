"""Kernel- and initialization-pluggable t-SNE with quality evaluation.

The pipeline: load sequences or points (``ingest``), turn sequences into
k-mer spectra (``featurize``), build a pairwise similarity matrix and its
joint distribution (``kernels``), pick a starting layout (``initialization``),
descend KL divergence (``engine``), and score neighborhood preservation
(``evaluate``). ``cli`` wires it together, including the kernel x init sweep.
"""

from .engine import (
    Checkpoint,
    OptimizerParams,
    Trajectory,
    gradient,
    kl_divergence,
    low_dim_affinities,
    run_tsne,
)
from .evaluate import (
    NeighborTable,
    QualityCurve,
    auc_rnx,
    knn_table,
    neighborhood_agreement,
    quality_curve,
    r_of_k,
)
from .featurize import Alphabet, build_feature_matrix, infer_alphabet, kmer_spectrum
from .ingest import (
    PointDataset,
    SequenceRecord,
    generate_circle,
    parse_fasta,
    parse_labeled_csv,
)
from .initialization import (
    Embedding,
    ensemble_init,
    ica_init,
    make_initial_embedding,
    pca_init,
    random_init,
    rescale_init,
)
from .kernels import (
    KernelMatrix,
    approximate_kernel,
    gaussian_joint,
    isolation_kernel,
    kernel_to_joint,
    laplacian_kernel,
)

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "Checkpoint",
    "Embedding",
    "KernelMatrix",
    "NeighborTable",
    "OptimizerParams",
    "PointDataset",
    "QualityCurve",
    "SequenceRecord",
    "Trajectory",
    "approximate_kernel",
    "auc_rnx",
    "build_feature_matrix",
    "ensemble_init",
    "gaussian_joint",
    "generate_circle",
    "gradient",
    "ica_init",
    "infer_alphabet",
    "isolation_kernel",
    "kernel_to_joint",
    "kl_divergence",
    "kmer_spectrum",
    "knn_table",
    "laplacian_kernel",
    "low_dim_affinities",
    "make_initial_embedding",
    "neighborhood_agreement",
    "parse_fasta",
    "parse_labeled_csv",
    "pca_init",
    "quality_curve",
    "r_of_k",
    "random_init",
    "rescale_init",
    "run_tsne",
]
