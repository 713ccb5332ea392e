"""
Configuration for the Derived Decomposition Workbench
"""

import os

from dotenv import load_dotenv

load_dotenv()

# Ground field: 'q' for the rationals, 'fp:<p>' for a prime field
DEFAULT_FIELD = os.environ.get('DDW_FIELD', 'q')

# Resolution and search limits
DEPTH_CAP = int(os.environ.get('DDW_DEPTH_CAP', 12))
PATH_LENGTH_CAP = int(os.environ.get('DDW_PATH_LENGTH_CAP', 10))
IDEMPOTENT_LIFT_STEPS = 16
ISO_SEARCH_ATTEMPTS = 24
ISO_SEARCH_BOUND = 5

# Seeds
DEFAULT_SEED = int(os.environ.get('DDW_SEED', 20240611))

# Output Settings
OUTPUT_DIR = os.environ.get('DDW_OUTPUT_DIR', 'output')
os.makedirs(OUTPUT_DIR, exist_ok=True)

LOG_LEVEL = os.environ.get('DDW_LOG_LEVEL', 'INFO')

# Machine report schema
REPORT_SCHEMA = 'derived-decomposition-report'
REPORT_SCHEMA_VERSION = 1

# Corpus generation
CORPUS_PARAMS = {
    'min_modules': 20,
    'max_random_dim': 6,
    'random_attempts': 60,
    'coefficient_bound': 3,
    'complex_count': 10,
}

# Degree windows used by the property checks
CHECK_WINDOWS = {
    'derived_orthogonality': (-3, 3),
    'ext_anchor_degrees': 6,
    'fully_faithful_degrees': 3,
}

# Approximant oracle over Z
APPROXIMANT_PARAMS = {
    'max_stage': 8,
    'stable_run': 3,
    'torsion_window': 3,
}

# Symbolic engine over Z
PID_PARAMS = {
    'stratify_prime_limit': int(os.environ.get('DDW_PRIME_LIMIT', 30)),
    'representative_primes': (2, 3),
}

# Verdict vocabulary shared by every report
VERDICTS = {
    'holds': 'holds',
    'fails': 'fails',
    'unknown': 'unknown-at-cap',
}

# Human-report labels for the decomposition conditions
CONDITION_LABELS = {
    'a': '(a) Ext-orthogonality',
    'b': '(b) five-term sequences',
    'c_prime': "(c') X^I = 0 on injectives",
    'd_prime': "(d') Y_P = 0 on projectives",
    'pd_criterion': 'pd(_R S) <= 1 and Hom(Coker, Ker) = 0',
    'flat_criterion': 'fld(S_R) <= 1 and Coker (x) I = 0',
    'fully_faithful': 'projectives of Y / injectives of X criteria',
}
