import json
from pathlib import Path

import pytest

from linvariants.config import load_config, parse_config
from linvariants.pipeline import build_setup

ROOT = Path(__file__).resolve().parent.parent
CONFIGS = ROOT / "configs"
FIXTURES = ROOT / "src" / "linvariants" / "fixtures"


def config(name, **changes):
    cfg = load_config(CONFIGS / name)
    return cfg.with_changes(**changes) if changes else cfg


def inline_config(gens, k=2, N=12, depth=8, **extra):
    obj = {"p": 5, "N": N, "depth": depth, "weight": {"k": [k], "w": k}, "group": {"generators": gens}}
    obj.update(extra)
    return parse_config(obj)


@pytest.fixture(scope="session")
def tate_setup():
    return build_setup(config("tate_w2.json"))


@pytest.fixture(scope="session")
def tate_ctx(tate_setup):
    ctx = tate_setup.context(tate_setup.components[0])
    return ctx, ctx.harmonic_basis()


@pytest.fixture(scope="session")
def rank2_setup():
    return build_setup(config("rank2_w2.json"))


@pytest.fixture(scope="session")
def rank2_ctx(rank2_setup):
    ctx = rank2_setup.context(rank2_setup.components[0])
    return ctx, ctx.harmonic_basis()


@pytest.fixture(scope="session")
def rank2_w4_ctx():
    S = build_setup(config("rank2_w4.json", depth=4, N=8))
    ctx = S.context(S.components[0])
    return S, ctx, ctx.harmonic_basis()


def fixture_json(name):
    return json.loads((FIXTURES / name).read_text())


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
