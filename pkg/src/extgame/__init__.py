"""Extended games: strategies as sets of joint distributions, decided exactly."""

from .game import (
    BestResponse,
    ClassificationResult,
    ConfigurationError,
    ExtendedGame,
    GameVerdict,
    ImproperGame,
    JointWitness,
    Player,
    StrategyFamily,
    bayes_net_game,
    best_response,
    classify_game,
    classify_joint_strategy,
    expected_utility,
    union_family,
)
from .prob import (
    BayesNet,
    ConditionalTable,
    Cpt,
    Dag,
    JointDistribution,
    Space,
    StructureError,
    ValidationError,
    VariableSpec,
    conditional,
    cpt_from_joint,
    joint_from_bayes_net,
    marginal,
)
from .rational import to_fraction
from .strategies import (
    Certificate,
    IntersectionResult,
    LinearConstraint,
    StrategySet,
    Verdict,
    compile,
    conditional_independent_fixed,
    contains,
    cpt_fixed,
    feasible_dimension,
    intersect,
    marginal_fixed,
)

__version__ = "0.1.0"

__all__ = [
    "BayesNet",
    "BestResponse",
    "Certificate",
    "ClassificationResult",
    "ConditionalTable",
    "ConfigurationError",
    "Cpt",
    "Dag",
    "ExtendedGame",
    "GameVerdict",
    "ImproperGame",
    "IntersectionResult",
    "JointDistribution",
    "JointWitness",
    "LinearConstraint",
    "Player",
    "Space",
    "StrategyFamily",
    "StrategySet",
    "StructureError",
    "ValidationError",
    "VariableSpec",
    "Verdict",
    "bayes_net_game",
    "best_response",
    "classify_game",
    "classify_joint_strategy",
    "compile",
    "conditional",
    "conditional_independent_fixed",
    "contains",
    "cpt_fixed",
    "cpt_from_joint",
    "expected_utility",
    "feasible_dimension",
    "intersect",
    "joint_from_bayes_net",
    "marginal",
    "marginal_fixed",
    "to_fraction",
    "union_family",
]
