"""Model files: JSON with a name and either GIT data or a fan.

    {"name": "p2", "git": {"charges": [[1],[1],[1]], "omega": [1]},
     "defaults": {"bound": 6, "tol": 1e-10}}

    {"name": "f2", "fan": {"rays": [[1,0],[0,1],[-1,2],[0,-1]],
                           "max_cones": [[0,1],[1,2],[2,3],[0,3]]}}

Every violation is reported with a JSON pointer to the offending value.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from .errors import GeometryError, SchemaError
from .toric_geom import Fan, GitPresentation, ToricModel, fan_from_git, git_from_fan

FIXTURES = ("p1", "p2", "p1xp1", "f1", "f2")


@dataclass(frozen=True)
class ModelFile:
    name: str
    model: ToricModel
    source: str  # "git" or "fan"
    defaults: dict = field(default_factory=dict)

    @property
    def git(self) -> GitPresentation:
        return self.model.git

    @property
    def fan(self) -> Fan:
        return self.model.fan


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _int_matrix(value, path: str, width: int | None = None) -> list:
    if not isinstance(value, list) or not value:
        raise SchemaError("expected a non-empty list of integer lists", path)
    out = []
    for i, row in enumerate(value):
        if not isinstance(row, list):
            raise SchemaError("expected a list of integers", f"{path}/{i}")
        if width is None:
            width = len(row)
        if len(row) != width:
            raise SchemaError(f"expected length {width}, got {len(row)}", f"{path}/{i}")
        for j, x in enumerate(row):
            if not _is_int(x):
                raise SchemaError("expected an integer", f"{path}/{i}/{j}")
        out.append(row)
    return out


def _rational(x, path: str) -> Fraction:
    if _is_int(x):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError):
            pass
    raise SchemaError('expected an integer or a "num/den" string', path)


def _rational_vector(value, path: str, length: int) -> list:
    if not isinstance(value, list):
        raise SchemaError("expected a list", path)
    if len(value) != length:
        raise SchemaError(f"expected length {length}, got {len(value)}", path)
    return [_rational(x, f"{path}/{j}") for j, x in enumerate(value)]


def _object(value, path: str, allowed: set, required: set) -> dict:
    if not isinstance(value, dict):
        raise SchemaError("expected an object", path)
    for key in sorted(set(value) - allowed):
        raise SchemaError(f"unknown field {key!r}", f"{path}/{key}")
    for key in sorted(required - set(value)):
        raise SchemaError(f"missing field {key!r}", f"{path}/{key}")
    return value


def _defaults(value) -> dict:
    obj = _object(value, "/defaults", {"bound", "tol"}, set())
    out = {}
    if "bound" in obj:
        if not _is_int(obj["bound"]) or obj["bound"] < 0:
            raise SchemaError("expected a nonnegative integer", "/defaults/bound")
        out["bound"] = obj["bound"]
    if "tol" in obj:
        tol = obj["tol"]
        if isinstance(tol, bool) or not isinstance(tol, (int, float)) or not tol > 0:
            raise SchemaError("expected a positive number", "/defaults/tol")
        out["tol"] = float(tol)
    return out


def _geometry(exc: GeometryError, path: str) -> GeometryError:
    exc.path = exc.path or path
    exc.cause = exc.cause or exc.kind
    return exc


def parse_model(text) -> ModelFile:
    """Parse and validate a model file given as bytes or str."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as e:
            raise SchemaError(f"not UTF-8: {e}", "") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON: {e.msg} at line {e.lineno}", "") from None
    doc = _object(doc, "", {"name", "git", "fan", "defaults"}, {"name"})
    name = doc["name"]
    if not isinstance(name, str) or not name:
        raise SchemaError("expected a non-empty string", "/name")
    if ("git" in doc) == ("fan" in doc):
        raise SchemaError("exactly one of 'git' and 'fan' is required", "")
    defaults = _defaults(doc["defaults"]) if "defaults" in doc else {}

    if "git" in doc:
        git = _object(doc["git"], "/git", {"charges", "omega"}, {"charges", "omega"})
        charges = _int_matrix(git["charges"], "/git/charges")
        omega = _rational_vector(git["omega"], "/git/omega", len(charges[0]))
        try:
            g = GitPresentation(charges, omega)
        except GeometryError as e:
            raise _geometry(e, "/git/charges") from None
        try:
            f = fan_from_git(g)
        except GeometryError as e:
            raise _geometry(e, "/git/omega" if e.kind == "UnstableCharges" else "/git") from None
        return ModelFile(name, ToricModel(name, g, f), "git", defaults)

    fan = _object(doc["fan"], "/fan", {"rays", "max_cones", "omega"}, {"rays", "max_cones"})
    rays = _int_matrix(fan["rays"], "/fan/rays")
    cones = fan["max_cones"]
    if not isinstance(cones, list) or not cones:
        raise SchemaError("expected a non-empty list of index lists", "/fan/max_cones")
    for i, c in enumerate(cones):
        if not isinstance(c, list):
            raise SchemaError("expected a list of ray indices", f"/fan/max_cones/{i}")
        for j, x in enumerate(c):
            if not _is_int(x) or not 0 <= x < len(rays):
                raise SchemaError(f"expected a ray index in [0, {len(rays)})", f"/fan/max_cones/{i}/{j}")
    try:
        f = Fan(rays, cones)
    except GeometryError as e:
        raise _geometry(e, "/fan") from None
    hint = None
    if "omega" in fan:
        hint = _rational_vector(fan["omega"], "/fan/omega", len(rays) - len(rays[0]))
    try:
        g = git_from_fan(f, hint)
    except GeometryError as e:
        raise _geometry(e, "/fan") from None
    return ModelFile(name, ToricModel(name, g, f), "fan", defaults)


def load_model(path) -> ModelFile:
    with open(path, "rb") as fh:
        return parse_model(fh.read())


def fixture_text(name: str) -> bytes:
    return resources.files("toric_mirror").joinpath("data", f"{name}.json").read_bytes()


def load_fixture(name: str) -> ModelFile:
    if name not in FIXTURES:
        raise KeyError(f"no bundled model {name!r}; choose from {', '.join(FIXTURES)}")
    return parse_model(fixture_text(name))
