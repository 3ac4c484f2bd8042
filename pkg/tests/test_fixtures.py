import importlib.util
import json
from pathlib import Path

import pytest

from lefkit import serialize as ser

from conftest import FIXTURES

ROOT = Path(__file__).resolve().parents[1]


def _builder():
    spec = importlib.util.spec_from_file_location("build_fixtures", ROOT / "scripts" / "build_fixtures.py")
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return mod


DOCS = _builder().documents()


def test_no_stray_fixtures():
    assert sorted(p.name for p in FIXTURES.glob("*.json")) == sorted(DOCS)


@pytest.mark.parametrize("name", sorted(DOCS))
def test_fixture_is_current(name):
    assert (FIXTURES / name).read_text() == ser.dumps(DOCS[name])


@pytest.mark.parametrize("name", sorted(DOCS))
def test_fixture_loads(name):
    kind, _ = ser.load(json.loads((FIXTURES / name).read_text()))
    assert kind == DOCS[name].get("kind", "empty")
