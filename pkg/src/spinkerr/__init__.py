"""spinkerr: steady-state quantum optics of a spinning two-mode Kerr
whispering-gallery resonator.

The package models two counter-propagating cavity modes split by the
rotation-induced Sagnac-Fizeau shift, coupled by surface backscattering,
with self- and cross-Kerr interactions under a weak coherent drive.  It
computes excitation spectra, photon-number statistics and second-/third-
order correlations from the Lindblad steady state, cross-checked by two
independent oracles: adaptive time evolution and a closed-form weak-drive
solution.
"""

from ._kernels import backend_name
from .analytic import (AmplitudeSet, DetuningLadder, g2_analytic,
                       g2_cw_single_mode, g3_analytic, ladder,
                       steady_amplitudes)
from .errors import (ConfigError, DegenerateSteadyStateError, DimensionError,
                     EvolutionError, ParameterError, ResonantDegeneracyError,
                     SpaceError, SpinKerrError, StepSizeUnderflowError,
                     SteadyStateError, UndefinedObservableError)
from .fock import FockSpace, build_space
from .model import build, effective_hamiltonian, hamiltonian, liouvillian
from .observables import (CorrelationResult, Regime, classify, correlations,
                          g2, g3, mean_photon, photon_distribution)
from .params import (DerivedParams, Mode, PhysicalParams, derive,
                     load_config, paper_derived, paper_preset, save_config)
from .steadystate import (DensityMatrix, convergence_check, evolve,
                          evolve_from_vacuum, solve_steady, steady_state,
                          vacuum_state)
from .sweep import (Axis, SweepSpec, SweepResult, calibrate_switch_detuning,
                    export, find_extremum, load_result, run)

__version__ = "0.1.0"
