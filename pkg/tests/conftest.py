"""
Shared fixtures: the bundled case-study corpus and a small mixed-kind domain
"""
import shutil
from pathlib import Path

import pytest

from facpl.data.loader import bundled, load_config, load_domain, load_policy, load_request_set
from facpl.parsing import parse_config, parse_domain

CASESTUDY = Path(str(bundled("banking.dom"))).parent

requires_z3 = pytest.mark.skipif(shutil.which("z3") is None, reason="z3 is not on PATH")

SMALL_DOMAIN = """
subject/level : string in {L1, L2, L3}
subject/role : set-of-string in {assistant, officier}
action/id : string in {read, write}
resource/level : string in {L1, L2}
env/amount : double in {0.0, 2.5}
env/day : date in {2024-01-01, 2024-06-30}
env/urgent : boolean in {true, false} required
"""

SMALL_CONFIG = """
levels: L1 <= L2, L2 <= L3
roles: officier -> assistant
"""


@pytest.fixture(scope="session")
def casestudy_dir() -> Path:
    return CASESTUDY


@pytest.fixture(scope="session")
def banking_domain():
    return load_domain(bundled("banking.dom"))


@pytest.fixture(scope="session")
def banking_config():
    return load_config(bundled("banking.cfg"))


@pytest.fixture(scope="session")
def loan_domain():
    return load_domain(bundled("loan.dom"))


@pytest.fixture(scope="session")
def small_domain():
    return parse_domain(SMALL_DOMAIN)


@pytest.fixture(scope="session")
def small_config():
    return parse_config(SMALL_CONFIG)


@pytest.fixture(scope="session")
def policy():
    """Load a bundled policy by file name"""
    cache = {}

    def load(name: str):
        if name not in cache:
            cache[name] = load_policy(bundled(name))
        return cache[name]

    return load


@pytest.fixture(scope="session")
def request_set(banking_domain):
    def load(name: str):
        return load_request_set(bundled(name), banking_domain)

    return load
