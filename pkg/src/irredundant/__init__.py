"""Irredundant families of k-dimensional subcubes of the discrete cube {0,1}^n."""
from ._backend import BACKEND
from .bounds import (
    BoundsReport,
    PrivateAssignment,
    ah_upper,
    ball_certificate,
    beta,
    bollobas_certificate,
    bounds_report,
    entropy,
    eta,
    gamma0,
    meshulam_grid_upper,
    meshulam_upper,
    random_lower,
    ratio_g,
)
from .codes import Code, golay_code, hamming_code, is_perfect, max_separated_set, min_distance, trivial_code
from .constructions import (
    ConstructionSpec,
    b_family,
    e_extension,
    exceptional_5_3,
    from_code,
    optimal_p,
    principal,
    product_k1,
    random_family,
    translates,
)
from .cube import (
    CubeError,
    Family,
    Subcube,
    Vertex,
    chi_eval,
    contains,
    coverage_counts,
    hamming,
    is_irredundant,
    is_maximal_irredundant,
    parse_subcube,
    permute,
    private_vertices,
    project,
    translate,
)
from .search import (
    SearchProblem,
    SearchResult,
    ball_private_max,
    canonical_form,
    enumerate_extremal,
    max_irredundant,
    restricted_max_through_01,
)

__version__ = "0.1.0"
