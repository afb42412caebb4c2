"""Exact Riemann solver for the 1-D Euler equations (gamma-law gas)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .euler import DEFAULT_GAS, GasModel, PrimitiveState, check_admissible


class VacuumError(ValueError):
    """The data generate a vacuum, which the sampler does not handle."""


@dataclass(frozen=True)
class StarRegion:
    p: float
    u: float
    iterations: int
    residual: float


def _pressure_function(p, rho, pk, ck, g: GasModel):
    """Velocity jump ``f_K(p)`` across a shock or rarefaction, and its derivative."""
    gam = g.gamma
    if p > pk:
        A = 2.0 / ((gam + 1.0) * rho)
        B = (gam - 1.0) / (gam + 1.0) * pk
        s = np.sqrt(A / (p + B))
        return (p - pk) * s, s * (1.0 - 0.5 * (p - pk) / (B + p))
    ratio = p / pk
    f = 2.0 * ck / (gam - 1.0) * (ratio ** ((gam - 1.0) / (2.0 * gam)) - 1.0)
    df = ratio ** (-(gam + 1.0) / (2.0 * gam)) / (rho * ck)
    return f, df


def star_region(left: PrimitiveState, right: PrimitiveState, g: GasModel = DEFAULT_GAS, tol: float = 1e-14) -> StarRegion:
    """Newton iteration for the star pressure and velocity."""
    check_admissible(left, "left state")
    check_admissible(right, "right state")
    rl, ul, pl = map(float, left)
    rr, ur, pr = map(float, right)
    gam = g.gamma
    cl = np.sqrt(gam * pl / rl)
    cr = np.sqrt(gam * pr / rr)
    du = ur - ul
    if 2.0 * (cl + cr) / (gam - 1.0) <= du:
        raise VacuumError("initial data generate vacuum")

    # two-rarefaction guess, floored away from zero
    z = (gam - 1.0) / (2.0 * gam)
    p = ((cl + cr - 0.5 * (gam - 1.0) * du) / (cl / pl**z + cr / pr**z)) ** (1.0 / z)
    p = max(p, 1e-12 * min(pl, pr))
    it = 0
    for it in range(1, 200):
        fl, dfl = _pressure_function(p, rl, pl, cl, g)
        fr, dfr = _pressure_function(p, rr, pr, cr, g)
        step = (fl + fr + du) / (dfl + dfr)
        p_new = max(p - step, 1e-3 * p)
        change = 2.0 * abs(p_new - p) / (p_new + p)
        p = p_new
        if change < tol:
            break
    fl, _ = _pressure_function(p, rl, pl, cl, g)
    fr, _ = _pressure_function(p, rr, pr, cr, g)
    u = 0.5 * (ul + ur) + 0.5 * (fr - fl)
    return StarRegion(float(p), float(u), it, float(abs(fl + fr + du)))


def exact_riemann(left: PrimitiveState, right: PrimitiveState, g: GasModel = DEFAULT_GAS, x_over_t=0.0) -> PrimitiveState:
    """Self-similar solution sampled at ``x/t`` (scalar or array)."""
    star = star_region(left, right, g)
    s = np.asarray(x_over_t, dtype=float)
    rho, u, p = (np.empty_like(s) for _ in range(3))
    flat = [a.reshape(-1) for a in (s, rho, u, p)]
    for i, xi in enumerate(flat[0]):
        flat[1][i], flat[2][i], flat[3][i] = _sample(star, left, right, g, float(xi))
    if s.ndim == 0:
        return PrimitiveState(float(rho), float(u), float(p))
    return PrimitiveState(rho, u, p)


def _sample(star: StarRegion, left, right, g: GasModel, s: float):
    gam = g.gamma
    gm1, gp1 = gam - 1.0, gam + 1.0
    if s <= star.u:
        rk, uk, pk = map(float, left)
        sign = 1.0
    else:
        # mirror the right side onto the left-side formulas
        rk, uk, pk = map(float, right)
        uk, s = -uk, -s
        sign = -1.0
    us = sign * star.u
    ck = np.sqrt(gam * pk / rk)
    ps = star.p
    if ps > pk:
        shock = uk - ck * np.sqrt(gp1 / (2 * gam) * ps / pk + gm1 / (2 * gam))
        if s <= shock:
            out = (rk, uk, pk)
        else:
            r = rk * (ps / pk + gm1 / gp1) / (gm1 / gp1 * ps / pk + 1.0)
            out = (r, us, ps)
    else:
        head = uk - ck
        cs = ck * (ps / pk) ** (gm1 / (2 * gam))
        tail = us - cs
        if s <= head:
            out = (rk, uk, pk)
        elif s >= tail:
            out = (rk * (ps / pk) ** (1.0 / gam), us, ps)
        else:
            c = 2.0 / gp1 * (ck + 0.5 * gm1 * (uk - s))
            vel = 2.0 / gp1 * (ck + 0.5 * gm1 * uk + s)
            r = rk * (c / ck) ** (2.0 / gm1)
            out = (r, vel, pk * (c / ck) ** (2.0 * gam / gm1))
    return out[0], sign * out[1], out[2]
