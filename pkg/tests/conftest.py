import json
import sys
from importlib.resources import files
from pathlib import Path

import pytest
from jsonschema import Draft202012Validator
from referencing import Registry, Resource

sys.path.insert(0, str(Path(__file__).parent))

GOLDEN = Path(__file__).parent / "golden"


def _registry() -> Registry:
    reg = Registry()
    for path in files("pforge").joinpath("schemas").iterdir():
        if path.name.endswith(".json"):
            doc = json.loads(path.read_text())
            reg = reg.with_resource(doc["$id"], Resource.from_contents(doc))
    return reg


REGISTRY = _registry()


def validate(doc, schema: str) -> None:
    contents = REGISTRY.contents(schema)
    Draft202012Validator(contents, registry=REGISTRY).validate(doc)


@pytest.fixture
def golden():
    return GOLDEN


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
