"""Negativity-based bounds on entanglement distributed by qudit entanglement swapping."""

__version__ = "0.1.0"

from .bell import (BellIndex, SwapOutcome, average_swap_negativity, bell_basis, bell_state,
                   rde_lower_bound, swap_density, swap_outcomes, swap_state)
from .exceptions import (DimensionError, EntangleSwapError, NumericalError, StateError,
                         VerificationError)
from .kernels import BACKEND
from .linalg import Dims, hermitian_eigs, kron, partial_transpose, trace_norm
from .negativity import DensityMatrix, negativity_mixed, negativity_pure
from .roof import (Decomposition, OptimizerConfig, RoofEstimate, decompositions_from_isometry,
                   estimate_cren, estimate_noa, swap_decomposition)
from .schmidt import PureState, schmidt_decompose, schmidt_vector, state_from_schmidt
from .theorems import (BoundReport, PartitionSums, partition_sums, scan_generic,
                       verify_equal_schmidt, verify_low_dim, verify_max_entangled)
