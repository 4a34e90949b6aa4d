"""Exact checks and constructions for graded Q-manifolds and their L-infinity actions.

Models and reports are plain dicts in the same JSON format the ``gradedq`` command reads and writes.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Optional, Union

from . import _core
from ._core import Error, ModelError, UsageError

__all__ = [
    "Error",
    "ModelError",
    "UsageError",
    "catalog",
    "check",
    "commands",
    "constructions",
    "example",
    "example_model",
    "hamiltonian_constant",
    "lie_bracket",
    "load_model",
    "model_kinds",
    "normalize_model",
    "sign_table",
]

Model = Union[dict, str, Path]


def _text(model: Model) -> str:
    if isinstance(model, dict):
        return json.dumps(model)
    if isinstance(model, Path):
        return model.read_text()
    return model


def model_kinds() -> list[str]:
    return list(_core.model_kinds())


def commands() -> list[str]:
    return list(_core.commands())


def constructions() -> list[str]:
    return list(_core.constructions())


def catalog() -> list[dict[str, str]]:
    return [{"name": n, "construction": c, "description": d} for n, c, d in _core.catalog()]


def load_model(path: Union[str, Path]) -> dict:
    """Read and validate a model file; raises ModelError with ``issues`` (JSON pointers)."""
    try:
        text = Path(path).read_text()
    except OSError as e:
        err = ModelError(f"cannot read '{path}': {e}")
        err.issues = [{"pointer": "", "message": str(e)}]
        raise err from e
    return normalize_model(text)


def normalize_model(model: Model) -> dict:
    return json.loads(_core.normalize_model(_text(model)))


def example_model(name: str, seed: int = 1) -> dict:
    text = _core.example_model(name, seed)
    if text is None:
        raise UsageError(f"unknown example '{name}'")
    return json.loads(text)


def check(command: str, model: Model, construction: str = "", arity: Optional[int] = None,
          seed: int = 1, output: Union[str, Path] = "") -> dict[str, Any]:
    """Run a command ("check-q", "build", ...) and return its report."""
    return json.loads(_core.run(command, _text(model), construction, arity, seed, str(output)))


def example(name: str, arity: Optional[int] = None, seed: int = 1) -> dict[str, Any]:
    return json.loads(_core.run_example(name, arity, seed))


def sign_table(up_to: int) -> list[int]:
    return list(_core.sign_table(up_to))


def hamiltonian_constant() -> dict[str, Any]:
    homological, poisson, stable = _core.hamiltonian_constant()
    return {"from_homological": homological, "from_poisson": poisson, "stable": stable}


def lie_bracket(chart: list[dict], x: dict[str, str], y: dict[str, str]) -> dict[str, str]:
    return json.loads(_core.lie_bracket(json.dumps(chart), json.dumps(x), json.dumps(y)))
