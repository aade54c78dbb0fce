"""Populations and matrix diagnostics of single-excitation density matrices.

Every function accepts one 4x4 matrix or a stack shaped ``(..., 4, 4)``.

Dark/bright projections: with ``|e2> = |01>|0> exp(i phi)`` the free-space
dark state reads ``(|e1> - exp(-i phi)|e2>)/sqrt 2``, hence

    P_dark = (rho_11 + rho_22 - exp(-i phi) rho_12 - exp(i phi) rho_21) / 2

and P_bright carries the opposite sign on the coherences.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from .analytic import cavity_bright_state, cavity_dark_state
from .errors import DegenerateCouplingError

G, E1, E2, C = 0, 1, 2, 3

CSV_COLUMNS = ("t", "p_cav", "p_atom", "p_e1", "p_e2", "p_dark", "p_bright",
               "p_cav_dark", "p_cav_bright", "trace_err", "min_eig")
OBSERVABLE_NAMES = ("p_cav", "p_atom", "p_e1", "p_e2", "p_dark", "p_bright",
                    "p_cav_dark", "p_cav_bright", "trace_err", "herm_err", "min_eig")


@dataclass(frozen=True)
class ObservableSet:
    p_cav: float
    p_atom: float
    p_e1: float
    p_e2: float
    p_dark: float
    p_bright: float
    p_cav_dark: float
    p_cav_bright: float
    trace_err: float
    herm_err: float
    min_eig: float


def cavity_population(rho, field_amp: float = 1.0):
    return field_amp**2 * np.real(rho[..., C, C])


def _coherence_part(rho, phi):
    return np.real(np.exp(-1j * phi) * rho[..., E1, E2])


def dark_population(rho, phi: float):
    pops = np.real(rho[..., E1, E1] + rho[..., E2, E2])
    return 0.5 * pops - _coherence_part(rho, phi)


def bright_population(rho, phi: float):
    pops = np.real(rho[..., E1, E1] + rho[..., E2, E2])
    return 0.5 * pops + _coherence_part(rho, phi)


def _project(rho, vec):
    return np.real(np.einsum("i,...ij,j->...", vec.conj(), rho, vec))


def cavity_dark_population(rho, phi: float, g1: float, g2: float):
    return _project(rho, cavity_dark_state(g1, g2, phi).as_array())


def cavity_bright_population(rho, phi: float, g1: float, g2: float):
    return _project(rho, cavity_bright_state(g1, g2, phi).as_array())


def diagnostics(rho):
    """Return ``(trace_err, herm_err, min_eig)``.

    ``herm_err`` is the largest entry of ``|rho - rho^+|``; the eigenvalues are
    those of the Hermitian part.
    """
    rho = np.asarray(rho, dtype=complex)
    trace_err = np.abs(np.trace(rho, axis1=-2, axis2=-1) - 1.0)
    dag = np.conj(np.swapaxes(rho, -1, -2))
    herm_err = np.max(np.abs(rho - dag), axis=(-2, -1))
    herm = 0.5 * (rho + dag)
    finite = np.all(np.isfinite(herm), axis=(-2, -1))
    min_eig = np.full(finite.shape, np.nan)
    if np.any(finite):
        min_eig[finite] = np.linalg.eigvalsh(herm[finite])[..., 0]
    if min_eig.ndim == 0:
        min_eig = min_eig[()]
    return trace_err, herm_err, min_eig


def observe(rho, phi: float, g1: float, g2: float, field_amp: float = 1.0) -> dict:
    """All observables of ``rho`` as a dict keyed by :data:`OBSERVABLE_NAMES`.

    The cavity-basis populations are NaN when both couplings vanish.
    """
    rho = np.asarray(rho, dtype=complex)
    p_e1 = np.real(rho[..., E1, E1])
    p_e2 = np.real(rho[..., E2, E2])
    try:
        p_cd = cavity_dark_population(rho, phi, g1, g2)
        p_cb = cavity_bright_population(rho, phi, g1, g2)
    except DegenerateCouplingError:
        p_cd = np.full(p_e1.shape, np.nan)
        p_cb = np.full(p_e1.shape, np.nan)
    trace_err, herm_err, min_eig = diagnostics(rho)
    return {
        "p_cav": cavity_population(rho, field_amp),
        "p_atom": p_e1 + p_e2,
        "p_e1": p_e1,
        "p_e2": p_e2,
        "p_dark": dark_population(rho, phi),
        "p_bright": bright_population(rho, phi),
        "p_cav_dark": p_cd,
        "p_cav_bright": p_cb,
        "trace_err": trace_err,
        "herm_err": herm_err,
        "min_eig": min_eig,
    }


def observable_set(rho, phi: float, g1: float, g2: float,
                   field_amp: float = 1.0) -> ObservableSet:
    cols = observe(rho, phi, g1, g2, field_amp)
    return ObservableSet(**{k: float(v) for k, v in cols.items()})


def format_float(x: float) -> str:
    return "%.17g" % x


@dataclass
class TimeSeries:
    """Sampled trajectory: times, density matrices and observable columns."""

    t: np.ndarray
    rho: np.ndarray
    columns: dict
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.t)

    def __getitem__(self, name: str) -> np.ndarray:
        if name == "t":
            return self.t
        return self.columns[name]

    def sample(self, i: int) -> ObservableSet:
        return ObservableSet(**{k: float(v[i]) for k, v in self.columns.items()})

    def at(self, t: float, tol: float = 1e-9) -> int:
        """Index of the sample at time ``t``."""
        i = int(np.argmin(np.abs(self.t - t)))
        if abs(self.t[i] - t) > tol:
            raise KeyError(f"no sample at t={t}")
        return i

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(CSV_COLUMNS) + "\n")
        cols = [self[name] for name in CSV_COLUMNS]
        for row in zip(*cols):
            buf.write(",".join(format_float(float(v)) for v in row) + "\n")
        return buf.getvalue()

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_csv())
