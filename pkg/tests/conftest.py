import pytest

from tiltlab.cli import load_fixture
from tiltlab.tiltcore import certify_tilting


def _ctx(ws):
    t = ws.tilting
    return certify_tilting(ws.algebra, ws.modules[t["module"]], t["n"])


@pytest.fixture(scope="session")
def a2_ws():
    return load_fixture("fix_a2")


@pytest.fixture(scope="session")
def n3_ws():
    return load_fixture("fix_n3")


@pytest.fixture(scope="session")
def reg_ws():
    return load_fixture("fix_reg")


@pytest.fixture(scope="session")
def a2_ctx(a2_ws):
    return _ctx(a2_ws)


@pytest.fixture(scope="session")
def n3_ctx(n3_ws):
    return _ctx(n3_ws)


@pytest.fixture(scope="session")
def reg_ctx(reg_ws):
    return _ctx(reg_ws)
