# core/laguerre/quadrature.py
"""Sammensat Gauss-Legendre kvadratur på [0, T] med valgfrie knækpunkter."""

import logging
from functools import lru_cache
from typing import Callable, Iterable, Tuple

import numpy as np
from scipy.special import roots_legendre

from ..errors import LaguerreError

logger = logging.getLogger(__name__)


@lru_cache(maxsize=16)
def _reference_rule(order: int) -> Tuple[np.ndarray, np.ndarray]:
    nodes, weights = roots_legendre(order)
    return nodes, weights


def panel_edges(t_start: float, t_end: float, panel_width: float, breakpoints: Iterable[float] = ()) -> np.ndarray:
    """Panel boundaries of width <= panel_width, always including every breakpoint inside (t_start, t_end)."""
    if not t_end > t_start:
        raise LaguerreError(f"quadrature interval must be non-empty, got [{t_start}, {t_end}]")
    if panel_width <= 0:
        raise LaguerreError(f"panel width must be positive, got {panel_width}")

    cuts = sorted({float(t_start), float(t_end)} | {float(b) for b in breakpoints if t_start < b < t_end})
    edges = [cuts[0]]
    for left, right in zip(cuts[:-1], cuts[1:]):
        panels = max(1, int(np.ceil((right - left) / panel_width)))
        edges.extend(np.linspace(left, right, panels + 1)[1:])
    return np.asarray(edges)


def gauss_legendre_panels(
    t_start: float,
    t_end: float,
    panel_width: float,
    order: int,
    breakpoints: Iterable[float] = (),
) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the composite rule; exact for polynomials of degree 2*order-1 on every panel."""
    ref_nodes, ref_weights = _reference_rule(int(order))
    edges = panel_edges(t_start, t_end, panel_width, breakpoints)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * ref_nodes[None, :]).ravel()
    weights = (half[:, None] * ref_weights[None, :]).ravel()
    logger.debug(f"Composite Gauss-Legendre: {len(edges) - 1} panels, {nodes.size} nodes on [{t_start}, {t_end}]")
    return nodes, weights


def integrate(func: Callable[[np.ndarray], np.ndarray], nodes: np.ndarray, weights: np.ndarray) -> float:
    values = np.asarray(func(nodes), dtype=float)
    return float(np.dot(weights, values))
