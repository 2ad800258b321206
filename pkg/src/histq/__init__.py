"""Finite-dimensional numerics for temporal (history) quantum theories."""

from .core import (
    SystemModel,
    TimeGrid,
    Tolerances,
    active_tolerances,
    evolve,
    heisenberg,
    named_basis,
    projector_onto,
    tensor_product,
)
from .histories import (
    HistoryOperator,
    HomogeneousHistory,
    chain_map,
    class_operator,
    class_operator_sum,
    embed,
    history,
    support_reduce,
)
from .decoherence import (
    DecoherenceState,
    IlsOperator,
    d_basis_sum,
    d_form,
    d_trace,
    density,
    hermitian_basis,
    ils_reconstruct,
)
from .propositions import (
    Proposition,
    PropositionSpace,
    WrightOperator,
    hs_inner,
    p_norm,
    probability,
    proposition,
    unit_proposition,
    wright_operator,
)
from .consistency import (
    ConsistencyReport,
    Window,
    check_window,
    check_window_operators,
    is_maximally_refined,
    is_refinement,
    search_windows,
    window,
)
from .entropy import (
    EntropyReport,
    min_entropy,
    refinement_gap,
    sup_refinement_entropy,
    window_entropy,
    window_entropy_pnorm,
)
from .divergence import (
    GrowthVerdict,
    TruncationSeries,
    b1_series,
    b2_series,
    growth_fit,
)

__version__ = "0.1.0"
