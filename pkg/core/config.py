# core/config.py

from dataclasses import dataclass, field
from typing import Tuple


@dataclass
class NumericsConfig:
    """Central konfiguration for de numeriske tolerancer og standardværdier."""

    # --- Projektion / kvadratur ---
    reliability_bound: int = 30          # koefficienter over dette antal er upålidelige
    quadrature_order: int = 20           # Gauss-Legendre noder pr. panel
    panel_width_factor: float = 0.25     # panelbredde = faktor / p
    horizon_x_margin: float = 80.0       # ekstra horisont i x = 2pt enheder
    discrete_horizon: int = 2000         # mindste diskrete horisont i samples
    synthesis_dt_factor: float = 0.01    # dt for syntese = faktor / p
    spline_degree: int = 5               # interpolation af samplede kontinuerte signaler
    spline_panel_samples: int = 25       # panelbredde i samples for spline-kvadraturen

    # --- Polynomier ---
    large_m_threshold: int = 25          # over denne orden bruges kun rekursioner

    # --- Inversion og estimation ---
    zero_threshold: float = 1e-12        # |u_0| under dette regnes som nul
    condition_warning: float = 1e8       # advarsel når max|g|*max|u| overstiger dette
    rank_rtol: float = 1e-9              # relativ singulærværdi-tærskel
    singular_rtol: float = 1e-13         # |h_m| vagt relativt til naboerne h_{m-1}, h_{m+1}
    default_m_range: Tuple[int, ...] = field(default_factory=lambda: (1, 2, 3, 4, 5))

    # --- Eksperimenter ---
    sweep_workers: int = 4
    sweep_tolerance_continuous: float = 1e-9
    sweep_tolerance_discrete: float = 1e-8


# Global configuration instance that other modules will import
config = NumericsConfig()
