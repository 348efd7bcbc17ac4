"""Second-order transitive-closure logic on finite structures."""
from . import errors
from .encoders import (
    LinearSetSpec,
    TilingInstance,
    hamiltonian_direct,
    hamiltonian_formula,
    is_prime,
    linear_set_formula,
    linear_set_member,
    prime_formula,
    tiling_direct,
    tiling_encode,
)
from .evaluator import BFS, SAVITCH, EvalOptions, EvalReport, evaluate, holds, state_space_size, tc_reachable
from .logic import classify, normalize, sort_check
from .numeric import DEFAULT_REGISTRY, NumericPredicate, Registry, decide
from .structures import Structure, enumerate_structures, parikh_vector
from .text import dump_structure, parse_formula, parse_structure, print_formula
from .transforms import (
    Fidelity,
    collapse,
    eliminate_counters,
    equicard_formula,
    equiv_check,
    exact_bound,
    haertig_encode,
    lifted_predicate,
    plus_translate,
)

__version__ = "0.1.0"
