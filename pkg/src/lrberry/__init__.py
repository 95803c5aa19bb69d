"""Lie-algebraic diagonalization, Lewis-Riesenfeld invariants and Berry phases
for su(1,1) and su(2) driven Hamiltonians, with a Schroedinger oracle."""

from .algebra import (
    SU11,
    SU2,
    GeneratorSet,
    ModeOperators,
    RepSpec,
    build_boson_mode,
    build_su11_rep,
    build_su2_rep,
    compose_schwinger_su2,
    compose_two_mode_su11,
)
from .coherent_states import (
    NumberCoherentState,
    PolarGrid,
    evaluate_su11_wavefunction,
    evaluate_su2_wavefunction,
    pncs_su11_series,
    pncs_su2_series,
    zeta_from_params,
)
from .diagonalizer import (
    DiagResult,
    LinearHamiltonian,
    diagonal_energy_scale,
    solve_coherent_params,
    spectrum_check,
)
from .displacement import (
    CoherentParams,
    TransformCoeffs,
    displacement_operator,
    transformed_generators_closed_form,
    verify_similarity,
)
from .errors import *  # noqa: F401,F403
from .lr_phases import (
    AuxiliaryState,
    DrivingProtocol,
    PhaseBreakdown,
    adiabatic_dynamical_phase,
    adiabatic_fixed_point,
    berry_phase_closed_form,
    integrate_auxiliary,
    invariance_residual,
    invariant_matrix,
    lr_total_phase,
)
from .oracle import EvolutionRun, adiabatic_berry_experiment, evolve, extract_phases
from .tavis_cummings import (
    SectorSpec,
    TCLabels,
    TCParams,
    build_trilinear_hamiltonian,
    decompose_su11,
    decompose_su2,
    extract_sector,
    tc_berry_phase,
    tc_dynamical_energy,
)

__version__ = "0.1.0"
