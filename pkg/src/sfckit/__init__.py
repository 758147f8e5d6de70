"""Perfectly secure two-party computation of randomized functions.

Finite problems are joint input distributions together with channels from
the input pair to one or two outputs. The package decides perfect secure
computability under three privacy modes, synthesizes and verifies concrete
protocols, and evaluates the information-theoretic rate quantities that
govern communication cost, all in exact rational arithmetic.
"""

from .chain import (
    AuxChain,
    ChainReport,
    builtin_chain,
    chain_from_protocol,
    parse_chain,
    render_chain,
    verify_aux_chain,
)
from .errors import InputError, PreconditionError, SfcError, SizeError
from .feasibility import (
    CommonPart,
    FeasibilityReport,
    Partition,
    build_common_part,
    decide_both_privacy,
    decide_bob_privacy,
    reduce_problem,
)
from .graphs import (
    CgeWitness,
    Coloring,
    Graph,
    characteristic_graph,
    chromatic_entropy,
    conditional_graph_entropy,
    make_graph,
    maximal_independent_sets,
    power_graph,
)
from .problem import Problem, builtin_problem, make_problem, parse_problem, render_problem
from .protocol import (
    Protocol,
    SimReport,
    VerifyReport,
    builtin_protocol,
    expected_length,
    huffman_code,
    induced_joint,
    make_protocol,
    message_marginal,
    parse_protocol,
    render_protocol,
    simulate,
    simulate_csv,
    synthesize,
    verify_protocol,
)
from .rates import (
    ErasureRates,
    RateReport,
    SumRateReport,
    WynerReport,
    binary_entropy,
    cutset_bounds,
    erasure_example_rates,
    erasure_grid_csv,
    rate_region_corner,
    sum_rate_both_privacy,
    wyner_common_information,
)
from .tables import (
    CondTable,
    JointTable,
    conditional_mutual_information,
    entropy,
    entropy_bits,
    extend,
    is_markov,
    make_cond,
    make_joint,
    marginalize,
    total_variation,
)

__version__ = "0.1.0"

__all__ = [
    "AuxChain",
    "ChainReport",
    "CgeWitness",
    "Coloring",
    "CommonPart",
    "CondTable",
    "ErasureRates",
    "FeasibilityReport",
    "Graph",
    "InputError",
    "JointTable",
    "Partition",
    "PreconditionError",
    "Problem",
    "Protocol",
    "RateReport",
    "SfcError",
    "SimReport",
    "SizeError",
    "SumRateReport",
    "VerifyReport",
    "WynerReport",
    "binary_entropy",
    "build_common_part",
    "builtin_chain",
    "builtin_problem",
    "builtin_protocol",
    "chain_from_protocol",
    "characteristic_graph",
    "chromatic_entropy",
    "conditional_graph_entropy",
    "conditional_mutual_information",
    "cutset_bounds",
    "decide_bob_privacy",
    "decide_both_privacy",
    "entropy",
    "entropy_bits",
    "erasure_example_rates",
    "erasure_grid_csv",
    "expected_length",
    "extend",
    "huffman_code",
    "induced_joint",
    "is_markov",
    "make_cond",
    "make_graph",
    "make_joint",
    "make_problem",
    "make_protocol",
    "marginalize",
    "maximal_independent_sets",
    "message_marginal",
    "parse_chain",
    "parse_problem",
    "parse_protocol",
    "power_graph",
    "rate_region_corner",
    "reduce_problem",
    "render_chain",
    "render_problem",
    "render_protocol",
    "simulate",
    "simulate_csv",
    "sum_rate_both_privacy",
    "synthesize",
    "total_variation",
    "verify_aux_chain",
    "verify_protocol",
    "wyner_common_information",
]
