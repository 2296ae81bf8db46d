"""Common constants for momax."""
import math

TOLERANCE = 1e-9
SUPPORT_TOLERANCE = 1e-12

BRUTE_FORCE_LIMIT = 10 ** 7

DEFAULT_PHI = 10.0
DEFAULT_REPETITIONS = 20
DEFAULT_EPSILON = 0.1
DEFAULT_DELTA = 0.1

BACKEND_EXACT = "exact-lazy-resolve"
BACKEND_MWU = "mwu"
LP_BACKENDS = (BACKEND_EXACT, BACKEND_MWU)

UDWANI_ITERATIONS = 100
UDWANI_STEP = 0.1

DEFAULT_REL_TOL = 0.01
# Fraction of OPT' an algorithm must reach for a guess to count as feasible.
SATURATE_ACCEPT_RATIO = 1.0
UDWANI_ACCEPT_RATIO = (1 - 1 / math.e) ** 2

DEFAULT_INFLUENCE_SAMPLES = 1000
DEFAULT_EDGE_PROB = 0.1
DISTANCE_MEMORY_BUDGET = 2 * 10 ** 8
REACH_MEMORY_BUDGET = 2 * 10 ** 8

DEFAULT_KRONECKER_INITIATOR = ((0.9, 0.5), (0.5, 0.1))
DEFAULT_KRONECKER_POWER = 6
DEFAULT_ER_P = 0.1
DEFAULT_BA_D = 5

DEFAULT_TIME_LIMIT_S = 600.0

# algorithm names
ALG_LP_GREEDY = "lp_greedy"
ALG_LP_GREEDY_MWU = "lp_greedy_mwu"
ALG_LP_GREEDY_FULL = "lp_greedy_full"
ALG_ROUND_ROBIN = "greedy_round_robin"
ALG_MINIMUM = "greedy_minimum"
ALG_SATURATE = "saturate"
ALG_UDWANI = "udwani_mwu"

# objective families
OBJ_COVER = "cover"
OBJ_CENTRALITY = "centrality"
OBJ_INFLUENCE = "influence"
OBJECTIVES = (OBJ_COVER, OBJ_CENTRALITY, OBJ_INFLUENCE)

# generator families
FAMILY_ER = "er"
FAMILY_BA = "ba"
FAMILY_KRONECKER = "kronecker"
FAMILIES = (FAMILY_ER, FAMILY_BA, FAMILY_KRONECKER)

# ablation axes
AXIS_REPETITIONS = "reps"
AXIS_PHI = "phi"

# configuration keys
CONF_NAME = "name"
CONF_OBJECTIVE = "objective"
CONF_FAMILY = "family"
CONF_NODES = "nodes"
CONF_COLORS = "colors"
CONF_P = "p"
CONF_D = "d"
CONF_INITIATOR = "initiator"
CONF_POWER = "power"
CONF_HARD = "hard"
CONF_EDGE_FILES = "edge_files"
CONF_DIRECTED = "directed"
CONF_COLOR_FILE = "color_file"
CONF_PROB_FILE = "prob_file"
CONF_TARGET = "target"
CONF_EDGE_PROB = "edge_prob"
CONF_SAMPLES = "samples"
CONF_ALGORITHMS = "algorithms"
CONF_BUDGETS = "budgets"
CONF_SEEDS = "seeds"
CONF_OUT = "out"
CONF_TIME_LIMIT = "time_limit_s"
CONF_WORKERS = "workers"
CONF_REPETITIONS = "repetitions"
CONF_PHI = "phi"
CONF_EPSILON = "epsilon"
CONF_DELTA = "delta"
CONF_MWU_ITERATIONS = "mwu_iterations"
CONF_PER_COLOR_BUDGET = "per_color_budget"
CONF_REL_TOL = "rel_tol"
CONF_UDWANI_ITERATIONS = "udwani_iterations"

# record fields
CSV_HEADER = (
    "instance",
    "objective_family",
    "algorithm",
    "B",
    "seed",
    "objective",
    "argmin_color",
    "oracle_calls",
    "wall_time_s",
    "extra",
)
STATUS = "status"
STATUS_TIMEOUT = "timeout"
STATUS_BUDGET_TOO_SMALL = "budget_too_small"

EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_INSTANCE_ERROR = 3
EXIT_TIME_LIMIT = 4

ALGORITHM_NAMES = (
    ALG_LP_GREEDY,
    ALG_LP_GREEDY_MWU,
    ALG_LP_GREEDY_FULL,
    ALG_ROUND_ROBIN,
    ALG_MINIMUM,
    ALG_SATURATE,
    ALG_UDWANI,
)

# experiment defaults
DEFAULT_NODES = 64
DEFAULT_COLORS = 20
DEFAULT_OUT = "results.csv"
DEFAULT_ABLATION_BUDGETS = (10,)
DEFAULT_ABLATION_SEEDS = (0, 1, 2, 3, 4)
PHI_SWEEP = (1.0, 2.0, 5.0, 10.0, 15.0, 25.0, 50.0)
REPETITION_SWEEP = (1, 2, 5, 10, 20, 40)
