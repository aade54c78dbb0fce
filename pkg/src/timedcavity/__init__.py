"""Single-photon transfer in a two-atom open cavity prepared in a timed state."""

from .analytic import (DBAmplitudes, StateVector, cavity_bright_state, cavity_dark_state,
                       cavity_probability_equal, db_basis_change, db_decomposition,
                       evolution_coefficients, interference_factor, lossless_state)
from .errors import (ConfigError, DegenerateCouplingError, DivergenceError,
                     IntegrationDiagnosticError, StepSizeError, TimedCavityError,
                     UnsupportedRegimeError)
from .geometry import (DerivedCouplings, SystemConfig, coupling_constants, cooperative_decay,
                       derive_couplings, dipole_shift, excitation_phase)
from .lindblad import (Generator, build_generator, evolve, initial_density, oracle_expm,
                       step_rk4)
from .observables import ObservableSet, TimeSeries, diagnostics, observe
from .scenarios import PRESETS, load_config, run, simulate, sweep

__version__ = "0.1.0"
