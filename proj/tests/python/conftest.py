import json
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[2]


@pytest.fixture(scope="session")
def root():
    return ROOT


@pytest.fixture(scope="session")
def fixtures_dir():
    return ROOT / "fixtures"


@pytest.fixture(scope="session")
def validators():
    jsonschema = pytest.importorskip("jsonschema")
    referencing = pytest.importorskip("referencing")
    resources = []
    for f in sorted((ROOT / "schemas").glob("*.schema.json")):
        contents = json.loads(f.read_text())
        resources.append((contents["$id"], referencing.Resource.from_contents(contents)))
    registry = referencing.Registry().with_resources(resources)
    make = lambda uri: jsonschema.Draft202012Validator({"$ref": uri}, registry=registry)
    return {"model": make("urn:gradedq:schema:model"), "report": make("urn:gradedq:schema:report")}
