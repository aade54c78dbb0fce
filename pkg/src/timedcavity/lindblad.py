"""Density-matrix equations of the two-atom cavity and their time integration.

The state is carried as a 12-component vector of density-matrix elements in
the phase-bearing basis (g, e1, e2, c)::

    0 e1e1   1 e1e2   2 e2e1   3 e2e2
    4 e1c    5 ce1    6 e2c    7 ce2    8 cc
    9 ge1   10 ge2   11 gc

``rho_gg`` is never integrated; it is restored as ``1 - (rho_e1e1 +
rho_e2e2 + rho_cc)``. The conjugate ground coherences ``rho_e1g`` etc. follow
from Hermiticity. Equations are written in the frame rotating at the cavity
frequency, so only the detuning ``delta = w0 - wc`` remains.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import IntegrationDiagnosticError, StepSizeError
from .geometry import DerivedCouplings, SystemConfig, derive_couplings
from .observables import TimeSeries, observe

G, E1, E2, C = 0, 1, 2, 3
ELEMENTS = (
    (E1, E1), (E1, E2), (E2, E1), (E2, E2),
    (E1, C), (C, E1), (E2, C), (C, E2), (C, C),
    (G, E1), (G, E2), (G, C),
)
NVEC = len(ELEMENTS)
# (element, conjugate partner) pairs inside the vector
_PAIRS = ((1, 2), (4, 5), (6, 7))
_DIAG = (0, 3, 8)
_ROWS = np.array([i for i, _ in ELEMENTS])
_COLS = np.array([j for _, j in ELEMENTS])

TRACE_TOL = 1e-10
HERM_TOL = 1e-10
POSITIVITY_TOL = 1e-9
PREFLIGHT_TOL = 1e-7
DEFAULT_DT = 1e-3
DEFAULT_STRIDE = 10


@dataclass(frozen=True, eq=False)
class Generator:
    """Linear right-hand side ``d x/dt = matrix @ x`` of the element vector."""

    matrix: np.ndarray
    couplings: DerivedCouplings
    config: SystemConfig

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.matrix @ x


def build_generator(couplings: DerivedCouplings | None = None,
                    config: SystemConfig | None = None) -> Generator:
    """Assemble the element-wise master equation as a dense 12x12 matrix.

    Either argument may be omitted: couplings default to those derived from
    ``config`` and ``config`` defaults to :class:`SystemConfig()`.
    """
    if config is None:
        config = SystemConfig()
    if couplings is None:
        couplings = derive_couplings(config)
    g1, g2 = couplings.g1, couplings.g2
    y, om = couplings.gamma12, couplings.omega12
    gam, kap, dlt = config.gamma, config.kappa, config.delta
    e = np.exp(1j * couplings.phi)
    ec = np.conj(e)

    M = np.zeros((NVEC, NVEC), dtype=complex)

    def add(row, col, value):
        M[row, col] += value

    # rho_e1e1
    add(0, 0, -2 * gam)
    add(0, 2, -(y + 1j * om) * e)
    add(0, 1, -(y - 1j * om) * ec)
    add(0, 5, -1j * g1)
    add(0, 4, 1j * g1)
    # rho_e1e2
    add(1, 1, -2 * gam)
    add(1, 0, -(y - 1j * om) * e)
    add(1, 3, -(y + 1j * om) * e)
    add(1, 7, -1j * g1)
    add(1, 4, 1j * g2 * e)
    # rho_e2e1, conjugate of rho_e1e2
    add(2, 2, -2 * gam)
    add(2, 0, -(y + 1j * om) * ec)
    add(2, 3, -(y - 1j * om) * ec)
    add(2, 6, 1j * g1)
    add(2, 5, -1j * g2 * ec)
    # rho_e2e2
    add(3, 3, -2 * gam)
    add(3, 2, -(y - 1j * om) * e)
    add(3, 1, -(y + 1j * om) * ec)
    add(3, 7, -1j * g2 * ec)
    add(3, 6, 1j * g2 * e)
    # rho_e1c
    add(4, 4, -(gam + kap + 1j * dlt))
    add(4, 6, -(y + 1j * om) * e)
    add(4, 8, -1j * g1)
    add(4, 0, 1j * g1)
    add(4, 1, 1j * g2 * ec)
    # rho_ce1, conjugate of rho_e1c
    add(5, 5, -(gam + kap - 1j * dlt))
    add(5, 7, -(y - 1j * om) * ec)
    add(5, 8, 1j * g1)
    add(5, 0, -1j * g1)
    add(5, 2, -1j * g2 * e)
    # rho_e2c
    add(6, 6, -(gam + kap + 1j * dlt))
    add(6, 4, -(y + 1j * om) * ec)
    add(6, 8, -1j * g2 * ec)
    add(6, 3, 1j * g2 * ec)
    add(6, 2, 1j * g1)
    # rho_ce2, conjugate of rho_e2c
    add(7, 7, -(gam + kap - 1j * dlt))
    add(7, 5, -(y - 1j * om) * e)
    add(7, 8, 1j * g2 * e)
    add(7, 3, -1j * g2 * e)
    add(7, 1, -1j * g1)
    # rho_cc
    add(8, 4, -1j * g1)
    add(8, 5, 1j * g1)
    add(8, 6, -1j * g2 * e)
    add(8, 7, 1j * g2 * ec)
    add(8, 8, -2 * kap)
    # ground coherences
    add(9, 9, 1j * dlt - gam)
    add(9, 10, -(y - 1j * om) * ec)
    add(9, 11, 1j * g1)
    add(10, 10, 1j * dlt - gam)
    add(10, 9, -(y - 1j * om) * e)
    add(10, 11, 1j * g2 * e)
    add(11, 11, -kap)
    add(11, 9, 1j * g1)
    add(11, 10, 1j * g2 * ec)

    M.setflags(write=False)
    return Generator(M, couplings, config)


def initial_density(phi: float = 0.0) -> np.ndarray:
    """Density matrix of the timed single-excitation state.

    The excitation phases live in the basis vectors, so the matrix is the
    same for every ``phi``; the argument is accepted for symmetry with the
    projection functions.
    """
    rho = np.zeros((4, 4), dtype=complex)
    rho[E1:E2 + 1, E1:E2 + 1] = 0.5
    return rho


def density_from_state(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def flatten(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho, dtype=complex)[..., _ROWS, _COLS]


def unflatten(x: np.ndarray) -> np.ndarray:
    """Rebuild the full 4x4 matrix (or a stack of them) from element vectors."""
    x = np.asarray(x, dtype=complex)
    rho = np.zeros(x.shape[:-1] + (4, 4), dtype=complex)
    rho[..., _ROWS, _COLS] = x
    rho[..., E1, G] = np.conj(x[..., 9])
    rho[..., E2, G] = np.conj(x[..., 10])
    rho[..., C, G] = np.conj(x[..., 11])
    rho[..., G, G] = 1.0 - (x[..., 0] + x[..., 3] + x[..., 8])
    return rho


def _hermitize_vec(x: np.ndarray) -> np.ndarray:
    x = x.copy()
    for i, j in _PAIRS:
        avg = 0.5 * (x[i] + np.conj(x[j]))
        x[i] = avg
        x[j] = np.conj(avg)
    for i in _DIAG:
        x[i] = x[i].real
    return x


def _rk4_vec(M: np.ndarray, x: np.ndarray, dt: float) -> np.ndarray:
    k1 = M @ x
    k2 = M @ (x + 0.5 * dt * k1)
    k3 = M @ (x + 0.5 * dt * k2)
    k4 = M @ (x + dt * k3)
    return _hermitize_vec(x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4))


def step_rk4(rho: np.ndarray, L: Generator, dt: float) -> np.ndarray:
    """One classical Runge-Kutta step followed by re-Hermitization."""
    if not dt > 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    x = _rk4_vec(L.matrix, flatten(rho), dt)
    rho = unflatten(x)
    return 0.5 * (rho + rho.conj().T)


def _integrate(M, x0, n_steps, dt, stride):
    samples = [x0.copy()]
    x = x0
    for i in range(1, n_steps + 1):
        x = _rk4_vec(M, x, dt)
        if i % stride == 0:
            samples.append(x.copy())
    return np.array(samples)


def evolve(rho0: np.ndarray, L: Generator, t_max: float, dt: float = DEFAULT_DT,
           stride: int = DEFAULT_STRIDE, check: bool = True,
           preflight: bool = False, meta: dict | None = None) -> TimeSeries:
    """Fixed-step RK4 integration with observables sampled every ``stride`` steps.

    ``t_max`` is rounded to the nearest whole number of steps. With ``check``
    set, trace, Hermiticity and positivity are verified at every sample and the
    first violation raises :class:`IntegrationDiagnosticError`. ``preflight``
    repeats the run at ``dt/2`` and raises :class:`StepSizeError` if any sampled
    element moves by more than 1e-7.
    """
    if not (t_max > 0 and dt > 0):
        raise ValueError(f"t_max and dt must be positive, got t_max={t_max}, dt={dt}")
    if dt > t_max:
        raise ValueError(f"dt={dt} exceeds t_max={t_max}")
    if stride < 1:
        raise ValueError(f"stride must be >= 1, got {stride}")
    n_steps = int(round(t_max / dt))
    x0 = flatten(rho0)
    xs = _integrate(L.matrix, x0, n_steps, dt, stride)
    times = dt * stride * np.arange(len(xs))

    if preflight:
        fine = _integrate(L.matrix, x0, 2 * n_steps, dt / 2.0, 2 * stride)
        err = float(np.max(np.abs(fine - xs)))
        if err > PREFLIGHT_TOL:
            raise StepSizeError(
                f"dt={dt} disagrees with dt/2 by {err:.3g} (> {PREFLIGHT_TOL:g}); "
                "reduce the step size")

    rho = unflatten(xs)
    c = L.couplings
    series = TimeSeries(
        t=times,
        rho=rho,
        columns=observe(rho, c.phi, c.g1, c.g2, L.config.field_amp),
        meta={"couplings": c, "dt": dt, "stride": stride,
              "dd_variant": L.config.dd_variant, **(meta or {})},
    )
    if check:
        check_physical(series)
    return series


def check_physical(series: TimeSeries) -> None:
    cols = series.columns
    bad = ((cols["trace_err"] > TRACE_TOL) | (cols["herm_err"] > HERM_TOL)
           | (cols["min_eig"] < -POSITIVITY_TOL) | ~np.isfinite(cols["min_eig"]))
    if np.any(bad):
        i = int(np.argmax(bad))
        raise IntegrationDiagnosticError(
            f"trace_err={cols['trace_err'][i]:.3g}, herm_err={cols['herm_err'][i]:.3g}, "
            f"min_eig={cols['min_eig'][i]:.3g}", float(series.t[i]))


def _expm_taylor(A: np.ndarray, order: int = 18) -> np.ndarray:
    norm = np.max(np.sum(np.abs(A), axis=0)) if A.size else 0.0
    squarings = max(0, int(math.ceil(math.log2(norm / 0.5)))) if norm > 0.5 else 0
    B = A / 2.0**squarings
    n = A.shape[0]
    out = np.eye(n, dtype=complex)
    for k in range(order, 0, -1):
        out = np.eye(n, dtype=complex) + (B @ out) / k
    for _ in range(squarings):
        out = out @ out
    return out


def propagator(L: Generator, t: float) -> np.ndarray:
    """``exp(t L)`` by scaling and squaring of a truncated Taylor series."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    return _expm_taylor(t * L.matrix)


def oracle_expm(L: Generator, t: float, rho0: np.ndarray) -> np.ndarray:
    return unflatten(propagator(L, t) @ flatten(rho0))
