"""Classical-quantum differential privacy: classical Fisher-information frontiers,
equiangular quantum witnesses, and certificates of non-classicality."""

from .certify import (
    INCONCLUSIVE,
    NOT_IN_EC,
    Certificate,
    certify_not_ec,
    cq_limit_sweep,
    gap_ratio,
    thm1_margin,
)
from .dp import (
    ClassicalTuple,
    DensityTuple,
    classical_dp_check,
    cq_dp_check,
    cq_dp_report,
    min_epsilon,
)
from .errors import (
    CQDPError,
    Infeasible,
    InvalidInput,
    NotDPAtEps,
    NotPositiveDefinite,
    ParseError,
    ResourceLimit,
    ValidationError,
)
from .fisher import f_theta, fisher_classical, fisher_quantum, witness_fisher_closed_form
from .frontier import (
    SublinearObjective,
    avg_fisher_supremum,
    extremal_tuple,
    k_star,
    lp_supremum,
    m2_closed,
    mnc_closed,
)
from .hermitian import eigh, inverse_pd, is_psd, min_eigenvalue, trace_product
from .io import emit_tuple, parse_tuple
from .witness import (
    MixtureChannel,
    UnitVectorSystem,
    apply_channel,
    canonical_witness,
    equiangular_complex,
    equiangular_real,
    t_max,
    witness_tuple,
)

__version__ = "0.1.0"
