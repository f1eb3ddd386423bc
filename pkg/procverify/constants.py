"""
Verification constants and configuration defaults.

This module centralizes rule codes, verdict words, exit codes and the
defaults that `procverify.load_config` lets the environment override.
"""

# File formats
FILE_ENCODING = "utf-8"

# Identifiers
ELEMENT_ID_PATTERN = r"[a-z][a-z0-9_]*"

# Well-formedness rule codes
W1_INVALID_ID = "W1"
W2_ENDPOINT_KIND = "W2"
W3_NO_PRODUCT = "W3"
W4_NO_PRODUCER = "W4"
W5_CYCLE = "W5"
W6_FEEDBACK_DIRECTION = "W6"
W7_UNKNOWN_REFERENCE = "W7"
WARN_MULTI_PRODUCER = "WARN_MULTI_PRODUCER"

# Simulation defaults
DEFAULT_DWELL = 1
DEFAULT_STEPS = 20
DEFAULT_FEEDBACK_RATE = 0.0
MAX_SIMULATION_STEPS = 10_000

# Search limits
ENUMERATE_MAX_ELEMENTS = 8
EXHAUSTIVE_REACH_MAX_ELEMENTS = 8

# Verdict words printed on the last line of every CLI report
VERDICT_WELL_FORMED = "well-formed"
VERDICT_ILL_FORMED = "ill-formed"
VERDICT_CONFORMING = "conforming"
VERDICT_NON_CONFORMING = "non-conforming"
VERDICT_HOLDS = "holds"
VERDICT_FAILS = "fails"
VERDICT_REACHABLE = "reachable"
VERDICT_UNREACHABLE = "unreachable"
VERDICT_ENUMERATED = "enumerated"
VERDICT_SIMULATED = "simulated"
VERDICT_EXPORTED = "exported"
VERDICT_INITIALIZED = "initialized"
VERDICT_SUMMARIZED = "summarized"
VERDICT_ERROR = "error"

# Exit codes
EXIT_SUCCESS = 0
EXIT_FAILURE = 1
EXIT_ERROR = 2

# Logging
DEFAULT_LOG_LEVEL = "WARNING"
LOG_FORMAT = "[%(asctime)s: %(levelname)s/%(name)s] %(message)s"

# Shipped examples
EXAMPLE_FILES = {
    "ml_dev": [
        "ml_dev.proc",
        "happy_path.trace",
        "feedback_retune.trace",
        "mutant_r1.trace",
        "mutant_r2.trace",
        "mutant_r3.trace",
        "mutant_r4.trace",
        "mutant_r5.trace",
        "mutant_r6.trace",
    ],
    "marl": [
        "marl.proc",
        "marl_happy_path.trace",
        "marl_curriculum.trace",
    ],
}
