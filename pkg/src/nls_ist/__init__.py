"""Inverse scattering for the defocusing NLS equation with nonzero boundary conditions.

Direct map (Jost functions, reflection coefficient, dark-soliton eigenvalues and
norming constants), the reflectionless Riemann-Hilbert solver, long-time partial-mass
asymptotics, a conservative finite-difference evolver and the ``nls-ist`` harness.
"""

from .asymptotics import (AsymptoticProfile, left_partial_mass_asymptotic,
                          right_partial_mass_asymptotic, sol, soliton_center, total_mass)
from .data import (ReflectionSamples, ScatteringData, ScatteringDataError, data_distance,
                   estimate_norms, evolve_scattering, reflection_grid, scattering_data_from_field,
                   spectral_grid)
from .direct import (DiscreteSpectrum, Eigenvalue, JostPair, ScatteringError,
                     find_discrete_spectrum, norming_constants, scattering_coefficients,
                     scattering_coefficients_batch, solve_jost)
from .evolver import (BoundaryGuardError, EvolutionConfig, EvolutionError, evolve, gl_energy,
                      half_line_mass, interval_mass)
from .families import parse_family
from .fields import FieldGrid, TailError
from .rhp import (ResidueSystemError, assemble_residue_system, nsoliton_grid, reconstruct_field,
                  soliton_profile)

__version__ = "0.1.0"
