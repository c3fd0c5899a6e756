"""Grid maps, their distortion envelopes, and chain pushforwards."""

from gridends.maps.envelopes import (
    EtaEnvelope,
    eta_envelope,
    quasisymmetry_envelope,
)
from gridends.maps.pairs import MODES, ContinuumPair, sample_continuum_pairs
from gridends.maps.push import ExtensionReport, extension_consistency, push_chain
from gridends.maps.specs import (
    MAP_NAMES,
    Correspondence,
    MapSpec,
    apply_map,
    covering_target_spacing,
)

__all__ = [
    "MAP_NAMES",
    "MODES",
    "ContinuumPair",
    "Correspondence",
    "EtaEnvelope",
    "ExtensionReport",
    "MapSpec",
    "apply_map",
    "covering_target_spacing",
    "eta_envelope",
    "extension_consistency",
    "push_chain",
    "quasisymmetry_envelope",
    "sample_continuum_pairs",
]
