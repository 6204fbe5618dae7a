"""Symmetric form of the two-fluid systems.

With ``U = (P, u, S)`` both systems read ``A0 dU/dt + sum_j A_j dU/dx_j = 0``
where ``A0 = diag(1/(rho P_rho), rho, ..., rho, 1)`` and every ``A_j`` is
symmetric.  In dimension ``d`` the matrices are ``(d+2) x (d+2)``; the
rows and columns of absent velocity components are dropped.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .eos import dpressure_drho, sound_speed
from .errors import DomainError


@dataclass(frozen=True)
class SymbolMatrices:
    a0: np.ndarray
    a: tuple  # A_1 .. A_d

    @property
    def dim(self):
        return len(self.a)


@dataclass(frozen=True)
class HyperbolicityReport:
    ok: bool
    diagnostics: str

    def __bool__(self):
        return self.ok


def _frozen(arr):
    arr.setflags(write=False)
    return arr


def assemble_matrices(law, prim):
    """Build ``A0`` and ``A_1 .. A_d`` at the primitive state ``prim``."""
    d = prim.dim
    rho = prim.rho
    k = 1.0 / (rho * dpressure_drho(law, rho, prim.s))
    size = d + 2
    a0 = np.diag([k] + [rho] * d + [1.0])
    mats = []
    for j in range(d):
        uj = prim.u[j]
        aj = np.zeros((size, size))
        aj[0, 0] = k * uj
        for i in range(1, d + 1):
            aj[i, i] = rho * uj
        aj[-1, -1] = uj
        aj[0, j + 1] = 1.0
        aj[j + 1, 0] = 1.0
        mats.append(_frozen(aj))
    return SymbolMatrices(_frozen(a0), tuple(mats))


def check_symmetric_hyperbolic(msys):
    """Exact symmetry of every ``A_j`` and positivity of the diagonal ``A0``."""
    a0 = np.asarray(msys.a0)
    n = a0.shape[0]
    for r in range(n):
        for c in range(n):
            if r != c and a0[r, c] != 0.0:
                return HyperbolicityReport(False, f"a0[{r},{c}] not zero")
    for i in range(n):
        if not a0[i, i] > 0.0:
            return HyperbolicityReport(False, f"a0[{i},{i}] not positive")
    for j, aj in enumerate(msys.a):
        aj = np.asarray(aj)
        for r in range(n):
            for c in range(r + 1, n):
                if aj[r, c] != aj[c, r]:
                    return HyperbolicityReport(
                        False, f"a{j + 1}[{r},{c}] != a{j + 1}[{c},{r}]")
    return HyperbolicityReport(True, "ok")


def characteristic_speeds(law, prim, xi):
    """Eigenvalues of ``A0^{-1} sum_j xi_j A_j``, ascending.

    Returned in closed form: ``u.xi`` with multiplicity ``d`` (``d - 1``
    vortical modes plus the entropy mode) and the acoustic pair
    ``u.xi +- c|xi|``.
    """
    xi = np.asarray(xi, dtype=float)
    if xi.shape != (prim.dim,):
        raise DomainError(f"direction must have {prim.dim} components")
    norm = float(np.linalg.norm(xi))
    if not norm > 0.0:
        raise DomainError("direction must be nonzero")
    c = sound_speed(law, prim.rho, prim.s)
    un = float(np.dot(prim.u, xi))
    return [un - c * norm] + [un] * prim.dim + [un + c * norm]


def max_wave_speed(law, states, directions):
    """``max |u.xi| + c`` over all states and unit directions (CFL bound)."""
    if not states:
        raise DomainError("max_wave_speed: no states")
    if not directions:
        raise DomainError("max_wave_speed: no directions")
    best = 0.0
    for prim in states:
        c = sound_speed(law, prim.rho, prim.s)
        for xi in directions:
            xi = np.asarray(xi, dtype=float)
            if xi.shape != (prim.dim,):
                raise DomainError(f"direction must have {prim.dim} components")
            if not math.isclose(float(np.linalg.norm(xi)), 1.0, rel_tol=1e-12):
                raise DomainError("directions must be unit vectors")
            best = max(best, abs(float(np.dot(prim.u, xi))) + c)
    return best
