import os
from dotenv import load_dotenv

load_dotenv()


def _flag(name: str, default: str) -> bool:
    return os.getenv(name, default).strip().lower() in {"1", "true", "yes", "on"}


# SMT back-end
SMT_SOLVER = os.getenv("FACPL_SMT_SOLVER", "z3 -in")
SMT_LOGIC = os.getenv("FACPL_SMT_LOGIC", "QF_LIRA")
SOLVER_TIMEOUT = float(os.getenv("FACPL_SOLVER_TIMEOUT", "30"))

# Exhaustive analysis
ENUMERATION_CAP = int(os.getenv("FACPL_ENUMERATION_CAP", str(10**7)))
WITNESS_LIMIT = int(os.getenv("FACPL_WITNESS_LIMIT", "10"))
JOBS = int(os.getenv("FACPL_JOBS", "1"))

# Default engine configuration file for the CLI (levels / role hierarchy)
CONFIG_FILE = os.getenv("FACPL_CONFIG")

LOG_LEVEL = os.getenv("FACPL_LOG_LEVEL", "WARNING")
LOG_JSON = _flag("FACPL_LOG_JSON", "true")
