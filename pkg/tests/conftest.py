import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n:>2}: {detail}")


@pytest.fixture(scope="session")
def full_verify_runs(tmp_path_factory):
    """Two runs of ``verify --suite all --seed 42``: exit codes,
    report bytes and wall-clock seconds."""
    import time

    from ckcontact.cli import main

    out = []
    for i in range(2):
        path = tmp_path_factory.mktemp("verify") / f"run{i}.json"
        t = time.perf_counter()
        code = main(["verify", "--suite", "all", "--seed", "42", "--out", str(path)])
        out.append((code, path.read_bytes(), time.perf_counter() - t))
    return out
