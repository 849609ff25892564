"""Self-embezzlement of entanglement: numeric no-go checks and an exact CAR-algebra scheme."""
from .chsh import (
    ChshSettings,
    catalyst_admissible,
    chsh_value_abstract,
    chsh_value_matrix,
    violation_factor,
)
from .embezzle import (
    NoGoReport,
    RearrangementInstance,
    brute_force_rearrangement_min,
    channel_selfembezzlement_fidelity,
    embezzlement_fidelity,
    lemma_scan,
    min_rearrangement_distance,
    nearest_product_extension,
    nogo_report,
    self_embezzlement_fidelity,
    vdh_catalyst,
)
from .schmidt import (
    ProbDist,
    SchmidtVector,
    aligned_fidelity,
    schmidt_from_probs,
    tensor_sorted,
    trace_distance_from_fidelity,
    variation_distance,
)

__version__ = "0.1.0"
