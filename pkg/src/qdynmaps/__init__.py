"""Dynamical maps, intermediate-time complete-positivity witnesses and
Markov / non-Markov classification of open-system evolution."""

from .dynmaps import (
    AMap,
    BMap,
    MapDiagnostics,
    a_to_b,
    apply_amap,
    b_to_a,
    choi_from_action,
    compose,
    diagnose,
    identity_amap,
    intermediate_amap,
    kraus_from_bmap,
    load_map,
    save_map,
)
from .markov import (
    ClassificationRecord,
    Verdict,
    classify,
    classify_family,
    concurrence,
    concurrence_trajectory,
    scan_divisibility,
)
from .models import (
    PFunction,
    SigmaZXModel,
    SpinStarModel,
    WernerFamily,
    p_eval,
    werner_bmap,
    werner_intermediate_bmap,
)

__version__ = "0.1.0"
