"""Radial function spaces on R^n: Bessel zeros, Littlewood-Paley and frame
decompositions, weighted Besov / Triebel-Lizorkin norms and embedding checks."""

from .annuli import AnnulusTable, FrameIndex, annulus_bounds, annulus_measure, annulus_table
from .embeddings import (
    EmbeddingDecision,
    EmbeddingQuery,
    NumericConfig,
    Verdict,
    check_besov_general,
    check_bessel_potential,
    check_elementary,
    check_embedding,
    check_power_weights,
    check_tl_general,
    check_two_regime,
)
from .errors import (
    AFLError,
    ConstructionError,
    IndexOutOfTable,
    InvalidParameters,
    NumericalFailure,
    UnsupportedOrderError,
)
from .frame import CoefficientGrid, Frame, analyze, build_frame, reconstruct, synthesize
from .profiles import Gaussian, RadialProfile
from .seqspace import SeqNormParams, b_norm, f_norm
from .special_functions import bessel_j, bessel_zeros, cached_bessel_zeros, eval_bessel_j
from .spectral import (
    FilterBank,
    SpaceParams,
    besov_norm,
    build_filter_bank,
    hankel_transform,
    inverse_hankel_transform,
    tl_norm,
    weighted_lp_norm,
)
from .weights import PowerWeight, TabulatedWeight, TwoRegimeWeight, weighted_mass

__version__ = "0.1.0"
