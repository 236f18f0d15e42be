"""Linear least squares as QUBO/Ising minimisation.

Real unknowns are written in radix-2 with basic (dual rail), one's
complement or two's complement qubit encodings; the resulting QUBO is
solved with classical samplers and compared with direct solvers.
"""

__version__ = "0.1.0"

from .cost import CostReport, cost_classical, cost_qa_prep, delta_costs, speedup_region
from .encoding import (Encoding, QubitLayout, Scheme, decode, grid_optimum, make_encoding,
                       nearest_representable, representable_range)
from .errors import FactorizationError, GuardError, ProblemFormatError, QalsError
from .kernels import BACKEND
from .problem import (ClassicalSolution, LeastSquaresProblem, gen_random_problem,
                      load_problem, residual, save_problem, solve_normal_equations, solve_qr)
from .qubo import (FlopCounter, Ising, Qubo, build_binary, build_real, build_real_counted,
                   energy, ising_to_qubo, normalize_to_hardware, qubo_to_ising)
from .samplers import (AnnealParams, BoltzmannTable, SampleSet, best_sample, boltzmann_exact,
                       exhaustive_solve, ground_mass, local_refine, simulated_anneal)

__all__ = [
    "BACKEND",
    "AnnealParams", "BoltzmannTable", "ClassicalSolution", "CostReport", "Encoding",
    "FactorizationError", "FlopCounter", "GuardError", "Ising", "LeastSquaresProblem",
    "ProblemFormatError", "QalsError", "Qubo", "QubitLayout", "SampleSet", "Scheme",
    "best_sample", "boltzmann_exact", "build_binary", "build_real", "build_real_counted",
    "cost_classical", "cost_qa_prep", "decode", "delta_costs", "energy", "exhaustive_solve",
    "gen_random_problem", "grid_optimum", "ground_mass", "ising_to_qubo", "load_problem",
    "local_refine", "make_encoding", "nearest_representable", "normalize_to_hardware",
    "qubo_to_ising", "representable_range", "residual", "save_problem", "simulated_anneal",
    "solve_normal_equations", "solve_qr", "speedup_region",
]
