"""hyperdoa: hyperdimensional-computing direction-of-arrival estimation.

Pipeline: snapshot matrix -> covariance features -> FHRR hypervector ->
associative-memory pseudo-spectrum -> greedy peak decoding, with a MUSIC
baseline and an MSPE evaluation harness.
"""

from .signal_model import (
    ArrayConfig,
    SourceScenario,
    generate_snapshots,
    sample_covariance,
    steering_matrix,
    steering_vector,
)
from .features import (
    FeatureExtractor,
    FeatureMethod,
    FeatureVector,
    Normalizer,
    SmoothingConfig,
    apply_normalizer,
    fit_normalizer,
    lag_features,
    lag_vector,
    smoothing_features,
    spatial_smoothing,
)
from .hdc import EncoderBasis, encode, encode_batch, expected_similarity, new_basis, similarity
from .memory import AngularGrid, AssociativeMemory, PseudoSpectrum, load, query, save, train
from .decoder import DecoderConfig, DoaEstimate, decode
from .music import music_estimate, music_spectrum
from .config import ExperimentConfig
from .evaluation import (
    MspeReport,
    export_report,
    periodic_sq_error,
    read_report,
    run_experiment,
    sweep,
)
from .trace import InferenceTrace

__version__ = "0.1.0"
