"""Transfer of subset classes between a group and its subgroups, plus the
semidirect-product orbit machinery and the named experiments."""

from .contexts import (
    ContextMismatch,
    FiniteIndexSubgroupOfFree,
    FreeAbelian,
    FreeGroup,
    SemidirectZmZ,
    SubgroupOfFree,
)
from .experiments import (
    example_3_12_experiment,
    pumping_refute,
    roundtrip_experiment,
    triple_block_member,
    two_counter_member,
)
from .handles import (
    CosetData,
    LatticeData,
    NotRecognizable,
    SubsetHandle,
    Undecided,
    alg_handle,
    as_recognizable,
    cf_handle,
    rat_handle,
    rec_lattice,
    red_form,
)
from .operations import (
    NotContained,
    cf_embed_free_factor,
    compose,
    decompose,
    intersect_recognizable,
    mul_rational,
    rec_restrict,
)
from .semidirect import (
    SemidirectElement,
    fibonacci_check,
    orbit_enumerate,
    orbit_grammar,
    orbit_rationality_probe,
    semidirect_eval,
    semidirect_multiply,
)
