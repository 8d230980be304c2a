"""JSON polytope documents, report serialization and built-in fixtures.

Rationals travel as strings (``"p/q"`` or ``"p"``) so documents stay exact;
plain JSON integers are accepted as shorthand for supports.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .errors import DocumentError
from .exact import is_primitive

_RATIONAL = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(s: Any) -> Fraction:
    if isinstance(s, bool) or isinstance(s, float):
        raise DocumentError(f"bad rational '{s}'")
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, Fraction):
        return s
    m = _RATIONAL.match(str(s))
    if not m or (m.group(2) is not None and int(m.group(2)) == 0):
        raise DocumentError(f"bad rational '{s}'")
    return Fraction(int(m.group(1)), int(m.group(2) or 1))


def format_rational(q: Fraction | int) -> str:
    return str(Fraction(q))


@dataclass(frozen=True)
class PolytopeDocument:
    name: str
    dimension: int
    conormals: tuple[tuple[int, ...], ...]
    supports: tuple[Fraction, ...]

    def build(self):
        from .polytope import build

        return build(self.conormals, self.supports)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "dimension": self.dimension,
            "conormals": [list(l) for l in self.conormals],
            "supports": [format_rational(k) for k in self.supports],
        }

    def serialize(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"

    def digest(self) -> str:
        canon = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return "sha256:" + hashlib.sha256(canon.encode("utf-8")).hexdigest()


def _document_from_obj(obj: Any) -> PolytopeDocument:
    if not isinstance(obj, dict):
        raise DocumentError("document must be a JSON object")
    for key in ("dimension", "conormals", "supports"):
        if key not in obj:
            raise DocumentError(f"missing field '{key}'")
    dim = obj["dimension"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise DocumentError("dimension must be a positive integer")
    raw_l, raw_k = obj["conormals"], obj["supports"]
    if not isinstance(raw_l, list) or not isinstance(raw_k, list):
        raise DocumentError("conormals and supports must be arrays")
    if len(raw_l) != len(raw_k):
        raise DocumentError(f"dimension mismatch: {len(raw_l)} conormals but {len(raw_k)} supports")
    conormals = []
    for j, l in enumerate(raw_l, 1):
        if not isinstance(l, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in l):
            raise DocumentError(f"conormal {j} must be an array of integers")
        if len(l) != dim:
            raise DocumentError(f"dimension mismatch in conormal {j}: length {len(l)}, expected {dim}")
        if not is_primitive(l):
            raise DocumentError(f"non-primitive conormal {j}")
        conormals.append(tuple(l))
    if len(set(conormals)) != len(conormals):
        raise DocumentError("duplicate conormal")
    supports = tuple(parse_rational(k) for k in raw_k)
    name = obj.get("name", "")
    if not isinstance(name, str):
        raise DocumentError("name must be a string")
    return PolytopeDocument(name, dim, tuple(conormals), supports)


def parse_polytope(text: str) -> PolytopeDocument:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"parse error at line {e.lineno} column {e.colno}: {e.msg}") from None
    return _document_from_obj(obj)


def from_h_representation(name: str, conormals: Sequence[Sequence[int]], supports: Sequence) -> PolytopeDocument:
    return _document_from_obj(
        {
            "name": name,
            "dimension": len(conormals[0]),
            "conormals": [list(l) for l in conormals],
            "supports": [format_rational(Fraction(k)) for k in supports],
        }
    )


FIXTURES = ("simplex", "cube", "trapezoid", "delpezzo1")


def fixture(name: str, params: Sequence = ()) -> PolytopeDocument:
    """Built-in example polytopes.

    - ``simplex(n, k)``: ``x_i >= 0``, ``sum x_i <= k``
    - ``cube(n, k)``: ``[0, k]^n``
    - ``trapezoid(a, b, k)``: ``x, y >= 0``, ``y <= b``, ``x + k y <= a`` (needs ``a > k b``)
    - ``delpezzo1``: the monotone blow-up of CP^2 at one point
    """
    try:
        ps = [parse_rational(p) for p in params]
    except DocumentError as e:
        raise DocumentError(f"invalid params for {name}: {e}") from None

    def want(count):
        if len(ps) != count:
            raise DocumentError(f"fixture {name} takes {count} parameters, got {len(ps)}")

    if name in ("simplex", "cube"):
        want(2)
        n, k = ps
        if n.denominator != 1 or n < 1:
            raise DocumentError(f"invalid params for {name}: n must be a positive integer")
        if k <= 0:
            raise DocumentError(f"invalid params for {name}: size must be positive")
        n = int(n)
        unit = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        if name == "simplex":
            ls = [tuple(-x for x in e) for e in unit] + [(1,) * n]
            ks = [0] * n + [k]
        else:
            ls = [v for e in unit for v in (tuple(-x for x in e), e)]
            ks = [0, k] * n
        return from_h_representation(f"{name}({n},{k})", ls, ks)
    if name == "trapezoid":
        want(3)
        a, b, k = ps
        if k.denominator != 1:
            raise DocumentError("invalid params for trapezoid: k must be an integer")
        if b <= 0 or a <= k * b:
            raise DocumentError("invalid params for trapezoid: need b > 0 and a > k*b")
        return from_h_representation(
            f"trapezoid({a},{b},{k})", [(-1, 0), (0, -1), (0, 1), (1, int(k))], [0, 0, b, a]
        )
    if name == "delpezzo1":
        want(0)
        return from_h_representation("delpezzo1", [(1, 0), (0, 1), (-1, -1), (1, 1)], [1, 1, 1, 1])
    raise DocumentError(f"unknown fixture '{name}'")


def parse_fixture_spec(spec: str) -> PolytopeDocument:
    """``"trapezoid:3,1,1"`` -> fixture document."""
    name, _, rest = spec.partition(":")
    params = [p for p in rest.split(",") if p.strip()] if rest else []
    return fixture(name.strip(), params)


def to_jsonable(x: Any) -> Any:
    """Convert results to JSON values; every rational becomes a string."""
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        raise TypeError("floating-point value in report")
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, frozenset, set)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [to_jsonable(v) for v in items]
    raise TypeError(f"cannot serialize {type(x).__name__}")
