"""interpolab: a desk-scale laboratory for interpolation experiments on
sparse random hypergraphs.

Seeded hypergraph ensembles, six combinatorial models, exact small-instance
solvers, one-step insertion identities in exact arithmetic, the regular
configuration-model interpolation chain, and seeded statistical checks that
the expected optimum is (nearly) superadditive in the number of nodes.
"""

__version__ = "0.1.0"

from .hypergraph import (  # noqa: E402,F401
    ConfigurationState,
    Hypergraph,
    disjoint_union,
    dump_graph,
    generate_config_partial,
    generate_er,
    generate_er_interpolated,
    generate_er_simple,
    load_graph,
    project,
)
from .models import (  # noqa: E402,F401
    Instance,
    ModelSpec,
    build_instance,
    dump_instance,
    evaluate,
    hamiltonian_bound_check,
    load_instance,
)
from .exact import (  # noqa: E402,F401
    GibbsTable,
    GroundStateSummary,
    IsingLevels,
    edge_addition_value,
    gibbs_event_probability,
    ground_state,
    ground_value,
    ising_levels,
    log_partition,
    nae_equivalence,
)
from .errors import PremiseViolation, SizeCapError  # noqa: E402,F401
from .reports import CheckReport  # noqa: E402,F401
