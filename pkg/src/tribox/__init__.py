"""Tripartite nonsignaling boxes: canonical vertices, Svetlichny and Mermin
discord, polytope membership and Born-rule boxes of three-qubit states."""

__version__ = "0.1.0"

from .box import (
    CORRELATOR_KEYS, Behavior, CorrelatorVector, from_correlators, from_probabilities, mix,
    to_correlators, white_noise,
)
from .canonical import (
    CanonicalVertex, class8_box, deterministic_box, isotropic_mermin, isotropic_svetlichny,
    mermin_box_mm, mermin_box_nmm, pr_box, svetlichny_box, vertex_from_label,
)
from .exceptions import *  # noqa: F401,F403
from .measures import (
    DiscordReport, PairingStructure, STRUCTURES, chsh_values, class99_value, discord_report,
    mermin_discord, mermin_moduli, mermin_value, monogamy_check, svetlichny_discord,
    svetlichny_moduli, svetlichny_value,
)
from .polytope import (
    MembershipResult, Region, ThreeDecomposition, VertexSet, classify_region, membership,
    three_decomposition, verify_decomposition, vertex_set,
)
from .symmetry import LocalReversibleOp, apply_lro, permute_parties
