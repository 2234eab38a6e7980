"""Bell-CH violation toolkit: analytic pairing scheme, see-saw optimizer,
Horodecki oracle, and state constructors for collective-measurement studies."""

__version__ = "0.1.0"

from .linalg import kron, eig_hermitian, positive_part_projector, partial_trace
from .states import (
    SchmidtState,
    BipartiteDensity,
    SizeGuardError,
    schmidt_state,
    to_density,
    tensor_power_schmidt,
    tensor_power_density,
    werner,
    isotropic,
    random_two_qubit,
    random_pure_qudit,
    concurrence,
    linear_entropy,
)
from .bell import (
    BellFunctional,
    BinaryMeasurement,
    ch,
    chsh_prob,
    i3322,
    bell_operator,
    evaluate,
    lhv_bound_bruteforce,
)
from .scheme import (
    alice_scheme,
    bob_best_response,
    analytic_ch_value,
    me_value,
    two_qubit_ncopy_value,
    concentration_value,
)
from .seesaw import (
    SeesawConfig,
    SeesawResult,
    random_binary_povm,
    alice_best_response,
    seesaw_maximize,
)
from .horodecki import correlation_matrix, max_ch, werner_threshold

CIRELSON_CH = 2.0 ** -0.5 - 0.5
