"""degreecalc: exact degree-set calculus for circle-bundle manifolds.

Compute the set of mapping degrees between closed oriented manifolds built
from circles, surfaces, circle bundles over hyperbolic surfaces, connected
sums and products; realise prescribed sets of integers (interval sequences,
subset sums, subset products) as degree sets with independently checkable
certificates.
"""

from .dsl import ParseError, SemanticError, parse_expr, print_expr
from .engine import (
    DimensionMismatch,
    NotDecided,
    SetBound,
    degree_bounds,
    degree_set_exact,
)
from .intset import (
    ALL_INTEGERS,
    DegreeSet,
    IntegerOverflow,
    InvalidInterval,
    UnrepresentableSet,
    interval,
    intersect,
    negate,
    product_set,
    sumset,
    union,
)
from .manifold import (
    CIRCLE,
    Circle,
    CircleBundle,
    ConnSum,
    MalformedExpr,
    ManifoldExpr,
    Product,
    Surface,
    UnsupportedExpression,
    conn_sum,
    dimension,
    is_pi2_trivial,
    is_product_domination_free,
    normalize,
    product,
)
from .realiser import (
    ArithIntervals,
    Certificate,
    Geometric,
    InvalidSpec,
    RealisationSpec,
    SubsetSums,
    SumsetFamily,
    ZeroNotContained,
    certificate_from_json,
    certificate_to_json,
    next_prime,
    realise_arith_intervals,
    realise_geometric,
    realise_subset_sums,
    realise_sumset,
)
from .verify import (
    EnumerationTooLarge,
    MalformedCertificate,
    Report,
    brute_subset_products,
    brute_subset_sums,
    brute_sumset,
    check_certificate,
    interval_union,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
