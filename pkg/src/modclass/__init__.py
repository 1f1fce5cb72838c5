"""Exact computations with finite rings and their finite right modules."""
from .approximation import (
    SuiteReport,
    construct_C1_preenvelope,
    run_suite,
    verify_comC1,
    verify_mainC1_condition,
    verify_preenvelope,
    verify_theorem_rare,
)
from .classification import (
    ClassificationReport,
    classify,
    is_C1,
    is_C2,
    is_C3,
    is_quasi_injective,
    key_trick_witness,
)
from .corpus import ModuleCorpus, closure_check, module_corpus
from .decomposition import decompose, is_indecomposable
from .homs import HomSpace, are_isomorphic, hom_space
from .injectivity import (
    character_module,
    cogenerator,
    indecomposable_injectives,
    injective_hull,
    is_injective,
    simple_modules,
    uniform_modules,
)
from .lattice import all_submodules, composition_length, is_essential, is_uniform, radical, socle
from .module import FiniteModule, ModuleHom, Submodule, direct_sum, quotient, regular_module
from .ring import FiniteRing, build_ring, opposite_ring, parse_ring_spec

__version__ = "0.1.0"
