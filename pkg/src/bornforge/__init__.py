"""Verification kernel for probabilistic process theories on finite matrices."""
__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BadParams, BornforgeError, DimensionMismatch, NoDiscard, NotContraction, NotMember,
    NotOrthonormal, NotPSD, NotSimplified, ObjectMismatch, OutOfRange, ParseError,
    SamplerUnavailable, ShapeError, UndetectedMutant, UnknownObject, UnsupportedTheory,
    WeightedSetTooLarge,
)
from .linalg import (  # noqa: E402
    ATOL, PROBE_TOL, UNIT, Morphism, TheoryObject, WeightedSet, as_object, choi, compose,
    effect, identity, kraus_from_choi, matrix, principal_sqrt, scalar, state, swap, tensor,
    unitary_complete,
)
from .categories import CHOI, MATRIX, CPMap  # noqa: E402
from .theory import (  # noqa: E402
    BUILTIN_NAMES, BornPower, Custom, StochasticInner, TheorySpec, TraceRule, batch_prob,
    builtin, check_axiom, check_discard, lambda_scalar, prob,
)
from .quotient import (  # noqa: E402
    CanonicalClass, GTriple, ProbeResult, canonicalize, equiv_probe, g_collapse, g_compose,
    g_embed, g_identity, g_prob, g_swap, g_tensor, lambda_G, lambda_Q, q_compose, q_prob,
    q_tensor, stinespring_dilate, theta_Q,
)
from .noise import (  # noqa: E402
    NoisyClass, equiv_noisy, lambda_N, lambda_S, noisy_canonical, prob_S, rigidity_check,
    semiring_check, theta_N, ws_compose, ws_tensor, ws_union,
)
from .harness import ClaimCheck, SuiteConfig, mutation_tests, registry_audit, run_suite  # noqa: E402
from .dsl import (  # noqa: E402
    TheoryFile, load_theory, parse_theory, parse_weighted_set, serialize, to_theory,
)
from .kernels import BACKEND  # noqa: E402
