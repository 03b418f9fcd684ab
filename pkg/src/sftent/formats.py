"""File formats: lattice literals, spec files, system descriptions.

Lattice files are JSON: either an explicit point list
``{"type": "points", "points": [[x, y], ...]}`` or a named generator
``{"type": "generator", "name": ..., "params": {...}}``.  Spec files are
``{"N": 2, "name": ..., "forbidden": [[[dx, dy, symbol], ...], ...]}``.
System descriptions are ``{"system": "omega_q", "q": 2}`` and friends, with
rectangle sides given in a small expression grammar over n (integer
constants, n, n^2, 2^n, and products thereof).
"""

from __future__ import annotations

import json
from typing import Callable

from .lattice import FiniteLattice
from .sft import BUILTIN_SPECS, SftSpec, full_shift
from .systems import (
    ExpandingSystem,
    lshape,
    lshape_system,
    omega_q,
    omega_q_plus,
    omega_q_system,
    rect_system,
    squares,
    staircase,
    staircase_system,
    stick_augmented,
    stick_system,
)


class FormatError(ValueError):
    """Malformed lattice/spec/system description."""


# ---------------------------------------------------------------------------
# lattices
# ---------------------------------------------------------------------------

_GENERATORS: dict[str, Callable] = {
    "rect": lambda params: _rect_from_params(params),
    "omega_q": lambda params: omega_q(int(params["q"]), int(params["n"])),
    "omega_q_plus": lambda params: omega_q_plus(int(params["q"]), int(params["n"])),
    "lshape": lambda params: lshape(int(params["n"])),
    "staircase": lambda params: staircase(int(params["n"])),
    "stick": lambda params: stick_augmented(
        int(params["n"]), tuple(params.get("v", (0, 1))), int(params["b"])
    ),
}


def _rect_from_params(params) -> FiniteLattice:
    from .lattice import rectangle

    origin = tuple(params.get("origin", (0, 0)))
    return rectangle(origin, int(params["m"]), int(params["n"]))


def lattice_from_dict(data: dict) -> FiniteLattice:
    kind = data.get("type")
    if kind == "points":
        pts = data["points"]
        for p in pts:
            if len(p) != 2 or not all(isinstance(c, int) for c in p):
                raise FormatError(f"lattice points must be integer pairs, got {p!r}")
        return FiniteLattice(pts)
    if kind == "generator":
        name = data.get("name")
        if name not in _GENERATORS:
            raise FormatError(f"unknown lattice generator {name!r}")
        return _GENERATORS[name](data.get("params", {}))
    raise FormatError(f"lattice type must be 'points' or 'generator', got {kind!r}")


def lattice_to_dict(lat: FiniteLattice) -> dict:
    return {"type": "points", "points": [[p.x, p.y] for p in lat]}


def load_lattice(path: str) -> FiniteLattice:
    with open(path) as fh:
        return lattice_from_dict(json.load(fh))


# ---------------------------------------------------------------------------
# specs
# ---------------------------------------------------------------------------


def spec_from_dict(data: dict) -> SftSpec:
    try:
        n = int(data["N"])
        forbidden = [
            [((int(dx), int(dy)), int(sym)) for dx, dy, sym in pattern]
            for pattern in data.get("forbidden", [])
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed spec: {exc}") from exc
    return SftSpec.make(n, forbidden, name=str(data.get("name", "")))


def spec_to_dict(spec: SftSpec) -> dict:
    return {
        "N": spec.alphabet_size,
        "name": spec.name,
        "forbidden": [
            [[p.x, p.y, s] for p, s in pattern.cells] for pattern in spec.forbidden
        ],
    }


def load_spec(path: str) -> SftSpec:
    with open(path) as fh:
        return spec_from_dict(json.load(fh))


def resolve_spec(text: str) -> SftSpec:
    """Builtin name ('golden-mean-h', 'full:N', ...) or a spec file path."""
    if text in BUILTIN_SPECS:
        return BUILTIN_SPECS[text]()
    if text.startswith("full:"):
        return full_shift(int(text.split(":", 1)[1]))
    return load_spec(text)


# ---------------------------------------------------------------------------
# systems
# ---------------------------------------------------------------------------


def parse_size_expr(text: str) -> Callable[[int], int]:
    """Tiny grammar: products of integer constants, n, n^k, and 2^n."""
    factors = str(text).replace(" ", "").split("*")

    def parse_factor(tok: str) -> Callable[[int], int]:
        if tok == "n":
            return lambda n: n
        if "^" in tok:
            base, exp = tok.split("^", 1)
            if base == "n":
                k = int(exp)
                return lambda n: n ** k
            if exp == "n":
                b = int(base)
                return lambda n: b ** n
            raise FormatError(f"unsupported size expression factor {tok!r}")
        try:
            c = int(tok)
        except ValueError as exc:
            raise FormatError(f"unsupported size expression factor {tok!r}") from exc
        return lambda n: c

    parsed = [parse_factor(tok) for tok in factors]

    def evaluate(n: int) -> int:
        out = 1
        for f in parsed:
            out *= f(n)
        return out

    return evaluate


def system_from_dict(data: dict) -> ExpandingSystem:
    kind = data.get("system")
    if kind == "squares":
        return squares()
    if kind == "omega_q":
        return omega_q_system(int(data["q"]))
    if kind == "lshape":
        return lshape_system()
    if kind == "staircase":
        return staircase_system()
    if kind == "stick":
        return stick_system(tuple(data.get("v", (0, 1))), float(data["a_target"]))
    if kind == "rect":
        w = parse_size_expr(data["w"])
        h = parse_size_expr(data["h"])
        return rect_system(w, h, name=f"rect:{data['w']}x{data['h']}")
    raise FormatError(f"unknown system {kind!r}")


def resolve_system(text: str) -> ExpandingSystem:
    """JSON object string, or shorthand like 'squares' / 'omega_q:2'."""
    text = text.strip()
    if text.startswith("{"):
        return system_from_dict(json.loads(text))
    name, _, rest = text.partition(":")
    if name == "squares":
        return squares()
    if name == "omega_q":
        return omega_q_system(int(rest))
    if name == "lshape":
        return lshape_system()
    if name == "staircase":
        return staircase_system()
    if name == "stick":
        vx, vy, a = rest.split(",")
        return stick_system((int(vx), int(vy)), float(a))
    if name == "rect":
        w, h = rest.split(",")
        return rect_system(parse_size_expr(w), parse_size_expr(h), name=f"rect:{w}x{h}")
    raise FormatError(f"unknown system shorthand {text!r}")


def resolve_lattice(text: str) -> FiniteLattice:
    """Shorthand like 'rect:3,2' / 'omega_q:2,2', or a lattice file path."""
    if ":" in text:
        name, rest = text.split(":", 1)
        args = [int(t) for t in rest.split(",")]
        if name == "rect":
            origin = (args[2], args[3]) if len(args) == 4 else (0, 0)
            return _rect_from_params({"m": args[0], "n": args[1], "origin": origin})
        if name == "omega_q":
            return omega_q(args[0], args[1])
        if name == "omega_q_plus":
            return omega_q_plus(args[0], args[1])
        if name == "lshape":
            return lshape(args[0])
        if name == "staircase":
            return staircase(args[0])
        if name == "stick":
            return stick_augmented(args[0], (args[1], args[2]), args[3])
        raise FormatError(f"unknown lattice shorthand {name!r}")
    return load_lattice(text)
