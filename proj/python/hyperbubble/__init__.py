"""Ground-state bubbles on the hyperbolic ball.

Thin wrapper around the C++ core: radial ground-state profiles, energy
levels, interaction integrals between translated bubbles, and the
two-bubble level estimates (margin sweeps and the min-max bracket).
"""

from ._core import (
    ModelParams,
    RadialProfile,
    __version__,
    ball_volume,
    center_of_mass,
    energy_levels,
    energy_report,
    interaction,
    lemma_sweep,
    mc_interaction,
    minmax_bracket,
    mixing_profile,
    solve_ground_state,
    t_ratio_bound,
)

__all__ = [
    "ModelParams",
    "RadialProfile",
    "__version__",
    "ball_volume",
    "center_of_mass",
    "energy_levels",
    "energy_report",
    "interaction",
    "lemma_sweep",
    "mc_interaction",
    "minmax_bracket",
    "mixing_profile",
    "solve_ground_state",
    "t_ratio_bound",
]
