"""Strong cospectrality and perfect state transfer analysis for simple graphs."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ClusterAmbiguityError,
    DisconnectedGraphError,
    GraphParseError,
    IllConditionedError,
    PreconditionError,
    PstlabError,
    TheoryViolation,
)
from .graph import (  # noqa: E402
    DistanceInfo,
    Graph,
    distances,
    encode_graph6,
    is_connected,
    is_regular,
    parse_edge_list,
    parse_graph6,
    read_graph,
    walk_count,
)
from .spectral import (  # noqa: E402
    Decomposition,
    Projectors,
    Spectrum,
    SpectrumKind,
    char_poly,
    eigen_decompose,
    verify_decomposition,
)
from .cospectral import (  # noqa: E402
    are_cospectral,
    are_strongly_cospectral,
    eigenvalue_support,
    is_spectrally_extremal,
    transfer_polynomial,
)
from .partitions import (  # noqa: E402
    antipodal_identity,
    are_antipodal,
    distance_partition,
    is_antipodal_drg,
    is_distance_regular,
    is_equitable,
    is_pseudo_equitable,
    perron_weights,
)
from .pst import (  # noqa: E402
    classify_graph,
    pst_decide_graph,
    pst_decide_pair,
    pst_transfer_along_ties,
    quadratic_form_of_support,
    two_adic_valuation,
)
from .walk import evolve, fidelity, fidelity_series, pst_oracle_search  # noqa: E402
