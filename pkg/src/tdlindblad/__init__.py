"""Steady states of time-dependent GKSL equations with Hermitian jump operators.

The package classifies asymptotic behaviour from two strong-symmetry
algebras (Schrodinger and interaction picture), simulates the master
equation, builds one-period channels, and ships a catalogue of named models.
"""
from ._tol import TOL, Tolerances
from .algebra import OperatorAlgebra, commutant, generate_algebra
from .dynamics import Trajectory, evolve, evolve_ensemble, fourier_spectrum, random_states, steady_state_probe
from .errors import ModelError, NotQuasiperiodicError, NumericalInconsistency
from .floquet import floquet_report, kraus_from_choi, mixing_check, one_cycle_map
from .model import GkslModel, TimeDependentOperator, liouvillian_matrix
from .operators import HilbertSpec
from .profiles import ExpDecayProfile, PiecewiseProfile, TrigProfile
from .symmetry import ClassificationReport, ad_ladder, c_int, c_sch, classify, uniqueness_by_ad
from .zoo import ZooEntry, build, catalogue

__version__ = "0.1.0"

__all__ = [
    "TOL",
    "Tolerances",
    "OperatorAlgebra",
    "commutant",
    "generate_algebra",
    "Trajectory",
    "evolve",
    "evolve_ensemble",
    "fourier_spectrum",
    "random_states",
    "steady_state_probe",
    "ModelError",
    "NotQuasiperiodicError",
    "NumericalInconsistency",
    "floquet_report",
    "kraus_from_choi",
    "mixing_check",
    "one_cycle_map",
    "GkslModel",
    "TimeDependentOperator",
    "liouvillian_matrix",
    "HilbertSpec",
    "ExpDecayProfile",
    "PiecewiseProfile",
    "TrigProfile",
    "ClassificationReport",
    "ad_ladder",
    "c_int",
    "c_sch",
    "classify",
    "uniqueness_by_ad",
    "ZooEntry",
    "build",
    "catalogue",
]
