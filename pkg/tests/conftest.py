import contextlib
import io
import os
import time

import numpy as np
import pytest

from sirmcmc import cli

ACCEPTANCE_FILE = "test_acceptance.py"
_criteria = {}


def pytest_runtest_logreport(report):
    if ACCEPTANCE_FILE not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _criteria[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, outcome in _criteria.items():
        name = nodeid.split("::")[-1]
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{mark}  {name}")


def euler_daily(beta, gamma, days, dt, n=1000.0, s=990.0, i=10.0, r=0.0):
    """Straight-line forward Euler, recording once per day.

    Written independently of the package integrators; used as the reference
    solution in accuracy tests.
    """
    per_day = round(1.0 / dt)
    out = [(s, i, r)]
    for _ in range(days):
        for _ in range(per_day):
            new_inf = beta * s * i / n
            new_rec = gamma * i
            s, i, r = s - new_inf * dt, i + (new_inf - new_rec) * dt, r + new_rec * dt
        out.append((s, i, r))
    return np.array(out)


@pytest.fixture(scope="session")
def euler_reference():
    """Euler at dt=1e-5 and its Richardson extrapolation with dt=2e-5, days 0..60."""
    fine = euler_daily(0.3, 0.1, 60, 1e-5)
    coarse = euler_daily(0.3, 0.1, 60, 2e-5)
    return fine, 2.0 * fine - coarse


def run_pipeline(workdir):
    """simulate -> fit -> summarize -> ppc with default settings inside ``workdir``."""
    cwd = os.getcwd()
    os.chdir(workdir)
    log = io.StringIO()
    timings = {}
    try:
        with contextlib.redirect_stdout(log):
            for command in (["simulate"], ["fit"], ["summarize"], ["ppc", "--draws-out", "draws.csv"]):
                start = time.perf_counter()
                assert cli.main(command) == 0, command
                timings[command[0]] = time.perf_counter() - start
    finally:
        os.chdir(cwd)
    (workdir / "stdout.txt").write_text(log.getvalue())
    (workdir / "timings.txt").write_text("".join(f"{k} {v}\n" for k, v in timings.items()))
    return workdir


@pytest.fixture(scope="session")
def default_run(tmp_path_factory):
    workdir = tmp_path_factory.mktemp("default_run")
    return run_pipeline(workdir)
