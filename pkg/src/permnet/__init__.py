"""Interaction nets as explicit partial permutations."""

from .errors import (
    ArityMismatch,
    CellNotEquivariant,
    CellPortIsLoop,
    CellPortNotPreserved,
    CutIsFixedPoint,
    CutNotBetweenAxioms,
    DisjointnessViolation,
    DuplicateName,
    IllTyped,
    LabelNotPreserved,
    Mismatch,
    MorphismError,
    NetSyntaxError,
    NotTotal,
    PermNetError,
    PortReuse,
    PrincipalNotPreserved,
    SizeMismatch,
    StaleRedex,
    SymbolMismatch,
    UnknownSymbol,
    ValidationError,
    WiringNotEquivariant,
)
from .perm import (
    DoubleOrbit,
    PartialInjection,
    WPermutation,
    disjoint_sum,
    double_orbits,
    ex,
    ex0_compose,
    full_ex_compose,
    restrict,
    splice_orbits,
    star,
)
from .net import (
    EMPTY_NET,
    Cell,
    Net,
    PortMap,
    SymbolTable,
    check_morphism,
    find_isomorphism,
    fresh_ports,
    is_morphism,
    parallel_sum,
    port_partition,
    rename,
    validate,
)
from .glue import (
    Context,
    CuttingWitness,
    Interface,
    canonical_interface,
    chord,
    context_glue,
    extend_morphism,
    glue,
    verify_cutting,
)
from .dynamics import (
    ActivePair,
    Rule,
    RuleSet,
    active_pairs,
    apply,
    lhs_redex,
    match_redexes,
    normalize,
    validate_rule,
)
from .acnet import (
    ACContext,
    ACNet,
    cutfree_lift,
    ex_collapse,
    ex_equivalent,
    juxtapose,
    validate_ac,
)
from .dpo import (
    AlmostInjective,
    ComplementResult,
    GeneralizedRule,
    complement,
    find_occurrence,
    generalized_reduce,
    identity_witness,
    lift_rule,
    pushout_of_gluings,
    validate_almost_injective,
    validate_generalized_rule,
)
from .frontend import Document, main, parse, print_document, to_dot

__version__ = "0.1.0"
