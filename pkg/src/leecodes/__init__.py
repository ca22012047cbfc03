"""Lee-metric channel coding over integer rings.

Channels matched to the Lee metric, finite-length achievability bounds,
nonbinary LDPC code construction, BP and SMP decoding, density-evolution
threshold analysis, and a seeded Monte Carlo simulation harness.
"""

from .ring import (
    RingContext,
    Composition,
    lee_weight,
    lee_weight_vec,
    lee_distance,
    composition_of,
    entropy_nats,
)
from .channels import (
    LeeChannelSpec,
    SphereCounter,
    partition_z,
    delta_from_beta,
    beta_from_delta,
    marginal_phi_star,
    transmit_memoryless,
)
from .bounds import (
    delta_q,
    h_delta,
    h_plus_delta,
    rcu_constant_weight,
    rcu_memoryless,
    shannon_limit,
    na_rate,
    na_bler,
)
from .codes import ParityCheckCode, sample_regular_ensemble, peg_construct
from .decoders import DecodeResult, XiSchedule, BpDecoder, SmpDecoder, bp_decode, smp_decode
from .density_evolution import (
    DeState,
    DeReport,
    tv_distance,
    smp_de_step,
    smp_de_run,
    smp_threshold,
    xi_schedule,
    qsc_approximation_gap,
    bp_de_run,
    bp_de_threshold,
)
from .simulate import SimConfig, SimRecord, run_sim, compare_to_benchmarks
from .rng import stream_rng

__version__ = "0.1.0"
