"""Nonlinear weights: the GENO path function and blend, plus WENO-JS, WENO-Z
and TENO baselines.

Indicator arguments follow one convention throughout: the candidate index
runs along the last axis, so ``is_k`` may be a plain list for a single
interface or an ``(m, k)`` array for ``m`` interfaces at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


@dataclass(frozen=True)
class GenoParams:
    C: float = 20.0
    r: float = 2.0
    r_L: float = 2.0
    eps: float = 1e-15
    C0: float = 8.0
    # "three": IS^tau from IS_1..IS_3 only; "full": also the shifted triple
    # IS_2..IS_4, so a 4-candidate family sees its whole large stencil
    tau_span: str = "three"

    def __post_init__(self):
        if self.tau_span not in ("three", "full"):
            raise ValueError(f"unknown tau_span {self.tau_span!r}")
        if not 10.0 <= self.C <= 20.0:
            raise ValueError(f"path steepness C={self.C} outside the validated range [10, 20]")
        if self.r < 1 or self.r_L < 1:
            raise ValueError("indicator exponents must be >= 1")
        if not self.eps > 0:
            raise ValueError("eps must be positive")


@dataclass(frozen=True)
class TenoParams:
    exponent: int = 7
    C_T: float = 1e-6

    def __post_init__(self):
        if not 0.0 < self.C_T < 1.0:
            raise ValueError(f"C_T must lie in (0, 1), got {self.C_T}")
        if self.exponent < 1:
            raise ValueError("TENO exponent must be >= 1")


class WeightVector(NamedTuple):
    w: np.ndarray
    d: np.ndarray


@dataclass
class SmoothnessBundle:
    is_k: np.ndarray
    is_high: np.ndarray
    is_low: np.ndarray
    is_tau: np.ndarray
    alpha: np.ndarray
    chi: np.ndarray


def _indicators(is_k) -> np.ndarray:
    a = np.asarray(is_k, dtype=float)
    if a.ndim == 0 or a.shape[-1] == 0:
        raise ValueError("need at least one smoothness indicator")
    return a


def _normalize(wt: np.ndarray) -> np.ndarray:
    return wt / np.sum(wt, axis=-1, keepdims=True)


def path_function(alpha, C: float = 20.0):
    """Blend fraction chi = tanh(C alpha) / tanh(C), clamped to [0, 1]."""
    chi = np.tanh(C * np.asarray(alpha, dtype=float)) / np.tanh(C)
    return np.clip(chi, 0.0, 1.0)


def ultimate_alpha(is_tau, is_high, is_low, r: float = 2.0, eps: float = 1e-15):
    is_tau = np.asarray(is_tau, dtype=float)
    a_high = 1.0 + (is_tau / (np.asarray(is_high, dtype=float) + eps)) ** r
    a_low = 1.0 + (is_tau / (np.asarray(is_low, dtype=float) + eps)) ** r
    return 2.0 * a_high / (a_high + a_low)


def is_high_structured(is_k):
    return np.max(_indicators(is_k), axis=-1)


def is_low_structured(is_k):
    return np.min(_indicators(is_k), axis=-1)


def is_low_averaged(is_k):
    a = _indicators(is_k)
    k0 = a.shape[-1]
    if k0 < 3:
        raise ValueError("averaged low-order indicator needs at least three candidates")
    return (np.sum(a, axis=-1) - np.min(a, axis=-1) - np.max(a, axis=-1)) / (k0 - 2)


def is_tau_threepoint(is_a, is_b, is_c):
    """``|(is_a + is_c)/2 - is_b|``; callers bind the indices per scheme."""
    return np.abs(0.5 * (np.asarray(is_a, dtype=float) + np.asarray(is_c, dtype=float)) - np.asarray(is_b, dtype=float))


def low_order_weights(is_k, d_k, r_L: float = 2.0, eps: float = 1e-15) -> WeightVector:
    a = _indicators(is_k)
    d = np.asarray(d_k, dtype=float)
    return WeightVector(_normalize(d / (a + eps) ** r_L), d)


def geno_bundle(is_k, is_tau, params: GenoParams = GenoParams()) -> SmoothnessBundle:
    """Structured-mesh indicator set: max/min of the candidates for IS^H/IS^L."""
    a = _indicators(is_k)
    high = is_high_structured(a)
    low = is_low_structured(a)
    alpha = ultimate_alpha(is_tau, high, low, params.r, params.eps)
    return SmoothnessBundle(a, high, low, np.asarray(is_tau, dtype=float), alpha, path_function(alpha, params.C))


def geno_blend(q_high, low_values, chi, weights: WeightVector):
    """``chi * q_high + (1 - chi) * sum_k w_k p_k``.

    ``chi`` may also be a ``SmoothnessBundle``.
    """
    if isinstance(chi, SmoothnessBundle):
        chi = chi.chi
    chi = np.asarray(chi, dtype=float)
    q_low = np.sum(weights.w * np.asarray(low_values, dtype=float), axis=-1)
    return chi * np.asarray(q_high, dtype=float) + (1.0 - chi) * q_low


def weno_js_weights(is_k, d_k, eps: float = 1e-6) -> WeightVector:
    a = _indicators(is_k)
    d = np.asarray(d_k, dtype=float)
    return WeightVector(_normalize(d / (a + eps) ** 2), d)


def weno_z_weights(is_k, d_k, tau_z, eps: float = 1e-15) -> WeightVector:
    a = _indicators(is_k)
    d = np.asarray(d_k, dtype=float)
    tau = np.asarray(tau_z, dtype=float)[..., None]
    return WeightVector(_normalize(d * (1.0 + tau / (a + eps))), d)


def teno_weights(is_k, d_k, params: TenoParams = TenoParams(), eps: float = 1e-15) -> WeightVector:
    a = _indicators(is_k)
    d = np.asarray(d_k, dtype=float)
    # normalise by the smallest indicator before powering so that the
    # exponent cannot overflow; gamma_k is unchanged by the common factor
    ratio = (np.min(a, axis=-1, keepdims=True) + eps) / (a + eps)
    gamma = _normalize(ratio ** params.exponent)
    keep = (gamma > params.C_T).astype(float)
    if np.any(np.sum(keep, axis=-1) == 0):
        raise ArithmeticError("TENO cut removed every candidate stencil")
    return WeightVector(_normalize(keep * d), d)


def linearity_proportion(weights: WeightVector):
    return np.min(np.asarray(weights.w) / np.asarray(weights.d), axis=-1)


SCENARIOS = ("tau_min", "tau_max")
METHODS = ("GENO", "WENO-Z", "TENO")


def chi_scenario_sweep(
    scenario: str,
    phi_grid,
    method: str,
    multiplicity: str = "1pp",
    geno: GenoParams = GenoParams(),
    teno: TenoParams = TenoParams(),
) -> np.ndarray:
    """Linear-reconstruction proportion for synthetic indicators.

    Three candidates with ``IS_min = 1`` and ``IS_max = phi * IS_min``;
    ``multiplicity`` ``"1pp"`` gives ``(1, phi, phi)``, ``"11p"`` gives
    ``(1, 1, phi)``.  ``tau_min``/``tau_max`` set IS^tau (and tau_Z) to
    ``IS_min``/``IS_max``.  Returns an array of ``(phi, chi)`` rows.
    """
    if scenario not in SCENARIOS:
        raise ValueError(f"unknown scenario {scenario!r}; expected one of {SCENARIOS}")
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    phi = np.atleast_1d(np.asarray(phi_grid, dtype=float))
    if np.any(phi < 1.0):
        raise ValueError("phi must be >= 1")
    ones = np.ones_like(phi)
    if multiplicity == "1pp":
        is_k = np.stack([ones, phi, phi], axis=-1)
    elif multiplicity == "11p":
        is_k = np.stack([ones, ones, phi], axis=-1)
    else:
        raise ValueError(f"unknown multiplicity {multiplicity!r}")
    tau = ones if scenario == "tau_min" else phi
    d = np.full(3, 1.0 / 3.0)
    if method == "GENO":
        chi = geno_bundle(is_k, tau, geno).chi
    elif method == "WENO-Z":
        chi = linearity_proportion(weno_z_weights(is_k, d, tau, geno.eps))
    else:
        chi = linearity_proportion(teno_weights(is_k, d, teno, geno.eps))
    return np.column_stack([phi, chi])
