"""Interface reconstruction kernels.

Each kernel maps stencil windows ``v`` of shape ``(m, 6)`` holding cell
averages at offsets ``-2..3`` relative to the reconstruction cell ``j`` to
the left limit at ``x_{j+1/2}``.  Right limits are obtained by the caller
through mirroring (reversing the window).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

from . import geno as G
from .stencils import (
    COMPACT_LARGE,
    COMPACT_SUBS,
    SIXTH_LARGE,
    SIXTH_SUBS,
    WENO5_LARGE,
    WENO5_SUBS,
    StencilSpec,
    coefficient_map,
    derive_optimal_weights,
    indicator_form,
    smoothness_indicator,
    value_weights,
    ReconPolynomial,
)

WINDOW = (-2, -1, 0, 1, 2, 3)
SCHEMES = ("GENO5", "GENO6", "WENO-JS5", "WENO-Z5", "TENO5", "TENO6", "LINEAR5", "LINEAR6")
WENO_JS_EPS = 1e-6
_KIND_CODES = {"LINEAR": 0, "GENO": 1, "WENO-JS": 2, "WENO-Z": 3, "TENO": 4}


def _columns(spec: StencilSpec) -> list[int]:
    return [WINDOW.index(o) for o in spec.offsets]


@dataclass(frozen=True)
class _Candidate:
    cols: list[int]
    value: np.ndarray
    diff_form: np.ndarray

    @classmethod
    def of(cls, spec: StencilSpec) -> "_Candidate":
        return cls(_columns(spec), np.asarray(value_weights(spec)), np.asarray(indicator_form(spec)))

    def evaluate(self, v):
        return v[:, self.cols] @ self.value

    def indicator(self, v):
        diffs = np.diff(v[:, self.cols], axis=1)
        return np.sum((diffs @ self.diff_form.T) ** 2, axis=1)


@dataclass(frozen=True)
class _Family:
    large: _Candidate
    subs: tuple[_Candidate, ...]
    d_opt: np.ndarray
    d_low: np.ndarray

    def tables(self):
        """Zero-padded coefficient tables over the full window for the fused kernel."""
        K = len(self.subs)
        values = np.zeros((K, 6))
        forms = np.zeros((K, 3, 5))
        extent = np.zeros((K, 3), dtype=np.int64)  # nonzero diff columns and form rows
        large = np.zeros(6)
        large[self.large.cols] = self.large.value
        for k, c in enumerate(self.subs):
            values[k, c.cols] = c.value
            f = c.diff_form
            forms[k, : f.shape[0], c.cols[0] : c.cols[0] + f.shape[1]] = f
            extent[k] = (c.cols[0], c.cols[0] + f.shape[1], f.shape[0])
        return large, values, forms, extent

    def candidates(self, v):
        values = np.stack([c.evaluate(v) for c in self.subs], axis=-1)
        indicators = np.stack([c.indicator(v) for c in self.subs], axis=-1)
        return values, indicators


def _family(large: StencilSpec, subs: tuple[StencilSpec, ...], central: int, C0: float) -> _Family:
    d_low = np.ones(len(subs))
    d_low[central] = C0
    return _Family(
        _Candidate.of(large),
        tuple(_Candidate.of(s) for s in subs),
        derive_optimal_weights(subs, large),
        d_low,
    )


@dataclass
class Reconstructor:
    """Callable reconstruction kernel for one scheme name.

    ``last_chi`` keeps the GENO path values of the most recent call (``None``
    for other schemes); the solver uses it for linearity diagnostics.
    """

    scheme: str
    geno: G.GenoParams = field(default_factory=G.GenoParams)
    teno: G.TenoParams = field(default_factory=G.TenoParams)
    backend: str = "numba" if numba is not None else "numpy"
    last_chi: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}; expected one of {SCHEMES}")
        order = self.scheme[-1]
        if order == "5":
            self._fam = _family(WENO5_LARGE, WENO5_SUBS, 1, self.geno.C0)
        else:
            self._fam = _family(SIXTH_LARGE, SIXTH_SUBS, 1, self.geno.C0)
        self._kind = self.scheme[:-1]
        if self.backend not in ("numba", "numpy"):
            raise ValueError(f"unknown backend {self.backend!r}")
        if self.backend == "numba" and numba is None:
            raise ValueError("numba backend requested but numba is not installed")
        self._tables = self._fam.tables()

    def both_sides(self, rows: np.ndarray):
        """Left and mirrored right limits for windows ``rows`` of shape ``(m, 6)``.

        Returns ``(left, right, chi_left, chi_right)``; the chi arrays are
        ``None`` unless the scheme is GENO.
        """
        ql = self(rows)
        chi_l = self.last_chi
        qr = self(rows[:, ::-1])
        return ql, qr, chi_l, self.last_chi

    def interfaces(self, d: np.ndarray, basis=None):
        """Fused projection, reconstruction and lift over a strip of cells.

        ``d`` is a ``(3, n + 6)`` conserved array; ``basis`` a ``CharBasis``
        with ``(n + 1, 3, 3)`` matrices, or ``None`` for componentwise.
        Returns ``(left, right, chi_left, chi_right)`` with ``(3, n + 1)``
        arrays; chi entries are 1 for non-GENO schemes.
        """
        n1 = d.shape[1] - 5
        out = np.empty((2, 3, n1))
        chi = np.empty((2, 3, n1))
        large, values, forms, extent = self._tables
        g, t = self.geno, self.teno
        if basis is None:
            L = R = np.zeros((1, 3, 3))
        else:
            L, R = np.ascontiguousarray(basis.left), np.ascontiguousarray(basis.right)
        _fused_interfaces(
            np.ascontiguousarray(d), L, R, basis is not None, _KIND_CODES[self._kind], large, values, forms, extent,
            self._fam.d_opt, self._fam.d_low, g.C, g.r, g.r_L, g.eps, WENO_JS_EPS,
            float(t.exponent), t.C_T, g.tau_span == "full", out, chi,
        )
        return out[0], out[1], chi[0], chi[1]

    def __call__(self, v: np.ndarray) -> np.ndarray:
        fam = self._fam
        kind = self._kind
        self.last_chi = None
        if kind == "LINEAR":
            return fam.large.evaluate(v)
        values, is_k = fam.candidates(v)
        if kind == "GENO":
            q_high = fam.large.evaluate(v)
            tau = G.is_tau_threepoint(is_k[:, 0], is_k[:, 1], is_k[:, 2])
            if self.geno.tau_span == "full" and is_k.shape[1] > 3:
                tau = np.maximum(tau, G.is_tau_threepoint(is_k[:, 1], is_k[:, 2], is_k[:, 3]))
            bundle = G.geno_bundle(is_k, tau, self.geno)
            low = G.low_order_weights(is_k, fam.d_low, self.geno.r_L, self.geno.eps)
            self.last_chi = bundle.chi
            return G.geno_blend(q_high, values, bundle.chi, low)
        if kind == "WENO-JS":
            wv = G.weno_js_weights(is_k, fam.d_opt, WENO_JS_EPS)
        elif kind == "WENO-Z":
            wv = G.weno_z_weights(is_k, fam.d_opt, np.abs(is_k[:, 0] - is_k[:, -1]), self.geno.eps)
        else:
            wv = G.teno_weights(is_k, fam.d_opt, self.teno, self.geno.eps)
        return np.sum(wv.w * values, axis=-1)


def _interfaces_kernel(
    d, L, R, project, kind, large, values, forms, extent, d_opt, d_low, C, r, r_L, eps, js_eps, t_exp, C_T, full_tau, out, chi
):
    # Fused version of Reconstructor.__call__ over every interface of a
    # strip.  d: (3, n+6) cell data, interface i reads columns i..i+5.
    # out, chi: (2, 3, n+1); side 0 is the left limit, side 1 the mirrored
    # right limit.  Kept as one function body: numba does not inline a
    # helper with this many arguments efficiently.
    n1 = d.shape[1] - 5
    K = values.shape[0]
    tanh_c = np.tanh(C)
    w = np.empty(6)
    dw = np.empty(5)
    win = np.empty((3, 6))
    q = np.empty(3)
    vals = np.empty(K)
    iss = np.empty(K)
    wt = np.empty(K)
    for i in range(n1):
        for a in range(3):
            for c in range(6):
                if project:
                    win[a, c] = L[i, a, 0] * d[0, i + c] + L[i, a, 1] * d[1, i + c] + L[i, a, 2] * d[2, i + c]
                else:
                    win[a, c] = d[a, i + c]
        for side in range(2):
            for a in range(3):
                for c in range(6):
                    w[c] = win[a, c] if side == 0 else win[a, 5 - c]
                qh = 0.0
                for c in range(6):
                    qh += large[c] * w[c]
                x = 1.0
                if kind == 0:
                    q[a] = qh
                    chi[side, a, i] = x
                    continue
                for c in range(5):
                    dw[c] = w[c + 1] - w[c]
                for k in range(K):
                    s = 0.0
                    for c in range(6):
                        s += values[k, c] * w[c]
                    vals[k] = s
                    tot = 0.0
                    lo_c = extent[k, 0]
                    hi_c = extent[k, 1]
                    for rr in range(extent[k, 2]):
                        t = 0.0
                        for c in range(lo_c, hi_c):
                            t += forms[k, rr, c] * dw[c]
                        tot += t * t
                    iss[k] = tot
                if kind == 1:
                    tau = abs(0.5 * (iss[0] + iss[2]) - iss[1])
                    if full_tau and K > 3:
                        tau = max(tau, abs(0.5 * (iss[1] + iss[3]) - iss[2]))
                    hi = iss[0]
                    lo = iss[0]
                    for k in range(1, K):
                        hi = max(hi, iss[k])
                        lo = min(lo, iss[k])
                    x_hi = tau / (hi + eps)
                    x_lo = tau / (lo + eps)
                    a_hi = 1.0 + (x_hi * x_hi if r == 2.0 else x_hi**r)
                    a_lo = 1.0 + (x_lo * x_lo if r == 2.0 else x_lo**r)
                    alpha = 2.0 * a_hi / (a_hi + a_lo)
                    z = C * alpha
                    # tanh rounds to exactly 1.0 beyond 19.1
                    x = 1.0 if (z > 19.1 and tanh_c == 1.0) else min(max(np.tanh(z) / tanh_c, 0.0), 1.0)
                    for k in range(K):
                        b = iss[k] + eps
                        wt[k] = d_low[k] / (b * b if r_L == 2.0 else b**r_L)
                elif kind == 2:
                    for k in range(K):
                        b = iss[k] + js_eps
                        wt[k] = d_opt[k] / (b * b)
                elif kind == 3:
                    tz = abs(iss[0] - iss[K - 1])
                    for k in range(K):
                        wt[k] = d_opt[k] * (1.0 + tz / (iss[k] + eps))
                else:
                    lo = iss[0]
                    for k in range(1, K):
                        lo = min(lo, iss[k])
                    gsum = 0.0
                    for k in range(K):
                        gk = ((lo + eps) / (iss[k] + eps)) ** t_exp
                        wt[k] = gk
                        gsum += gk
                    for k in range(K):
                        wt[k] = d_opt[k] if wt[k] / gsum > C_T else 0.0
                wsum = 0.0
                for k in range(K):
                    wsum += wt[k]
                low = 0.0
                for k in range(K):
                    low += wt[k] / wsum * vals[k]
                q[a] = x * qh + (1.0 - x) * low if kind == 1 else low
                chi[side, a, i] = x
            for a in range(3):
                if project:
                    out[side, a, i] = R[i, a, 0] * q[0] + R[i, a, 1] * q[1] + R[i, a, 2] * q[2]
                else:
                    out[side, a, i] = q[a]


_fused_interfaces = numba.njit(cache=True)(_interfaces_kernel) if numba is not None else _interfaces_kernel


# Compact (Hermite) operator.  Not time-marched; evaluated on prescribed
# averages and gradients.

def compact_linear_value(avg: np.ndarray, grad_h: np.ndarray) -> np.ndarray:
    """Degree-7 Hermite value at ``x_{j+1/2}``.

    ``avg`` and ``grad_h`` have shape ``(m, 4)`` for cells ``j-1..j+2``;
    ``grad_h`` holds cell-averaged gradients multiplied by ``h``.
    """
    data = np.concatenate([avg, grad_h], axis=1)
    return data @ value_weights(COMPACT_LARGE)


def compact_geno_value(avg: np.ndarray, grad_h: np.ndarray, params: G.GenoParams = G.GenoParams()):
    """GENO value at ``x_{j+1/2}`` on the compact stencil family.

    Returns ``(value, bundle)``.
    """
    avg = np.atleast_2d(np.asarray(avg, dtype=float))
    grad_h = np.atleast_2d(np.asarray(grad_h, dtype=float))
    q_high = compact_linear_value(avg, grad_h)
    sub_data = (
        np.column_stack([avg[:, 0], avg[:, 1], grad_h[:, 0]]),
        avg[:, 0:3],
        avg[:, 1:4],
    )
    values = []
    indicators = []
    for spec, data in zip(COMPACT_SUBS, sub_data):
        values.append(data @ value_weights(spec))
        coeffs = data @ coefficient_map(spec).T
        indicators.append(
            [smoothness_indicator(ReconPolynomial(spec.degree, c)) for c in coeffs]
        )
    values = np.stack(values, axis=-1)
    is_k = np.array(indicators).T
    tau = G.is_tau_threepoint(is_k[:, 1], is_k[:, 0], is_k[:, 2])
    bundle = G.geno_bundle(is_k, tau, params)
    d_low = np.array([1.0, params.C0, 1.0])
    low = G.low_order_weights(is_k, d_low, params.r_L, params.eps)
    return G.geno_blend(q_high, values, bundle.chi, low), bundle
