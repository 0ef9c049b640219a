"""Strict JSON configs for diffusion specs.

Documents are nested key-value trees; unknown keys anywhere are rejected so a
misspelling can never silently change a mathematical verdict.  Numeric
literals may be JSON numbers or strings: decimals, rationals "p/q", and
"inf"/"-inf" (so constants like the 1/3 removal ratio stay exact).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .cantorsets import ConstantRemoval, GeometricRemoval
from .dirichlet import DiffusionSpec, IntervalPiece, TestFunction
from .gapsystems import NATURAL, NORMALIZED, build_gap_system
from .measures import (
    Atom,
    CantorComplementDensity,
    CantorComponent,
    CantorTower,
    ConstDensity,
    ExpRecipDensity,
    Interval,
    MeasureSpec,
    PowerDensity,
)
from .scale import ScaleFunction
from .smoothcore import HamzaDensity
from .xreal import parse_extended


class ConfigError(ValueError):
    def __init__(self, message: str, path: str = "", line: int | None = None, col: int | None = None):
        self.path = path
        self.line = line
        self.col = col
        where = f" at {path}" if path else ""
        pos = f" (line {line}, column {col})" if line is not None else ""
        super().__init__(f"{message}{where}{pos}")


def _number(v: Any, path: str) -> float:
    if isinstance(v, bool):
        raise ConfigError("expected a number", path)
    if isinstance(v, (int, float)):
        return float(v)
    if isinstance(v, str):
        try:
            return parse_extended(v)
        except (ValueError, ZeroDivisionError):
            raise ConfigError(f"cannot parse numeric literal {v!r}", path) from None
    raise ConfigError("expected a number", path)


def _expect_dict(v: Any, path: str) -> dict:
    if not isinstance(v, dict):
        raise ConfigError("expected an object", path)
    return v


def _expect_list(v: Any, path: str) -> list:
    if not isinstance(v, list):
        raise ConfigError("expected a list", path)
    return v


class _Keys:
    """Consume keys from a dict, rejecting leftovers."""

    def __init__(self, d: dict, path: str):
        self.d = dict(d)
        self.path = path

    def take(self, name: str, default=None, required: bool = False):
        if name in self.d:
            return self.d.pop(name)
        if required:
            raise ConfigError(f"missing required key {name!r}", self.path)
        return default

    def done(self):
        if self.d:
            extra = ", ".join(sorted(self.d))
            raise ConfigError(f"unknown key(s): {extra}", self.path)


def _interval(v: Any, path: str) -> Interval:
    k = _Keys(_expect_dict(v, path), path)
    a = _number(k.take("a", required=True), path + ".a")
    b = _number(k.take("b", required=True), path + ".b")
    lc = bool(k.take("left_closed", False))
    rc = bool(k.take("right_closed", False))
    k.done()
    try:
        return Interval(a, b, lc, rc)
    except ValueError as exc:
        raise ConfigError(str(exc), path) from None


def _exact_number(v: Any, path: str) -> Fraction:
    """Removal ratios are kept as exact rationals so that gap endpoints are
    exact points of the construction."""
    if isinstance(v, bool):
        raise ConfigError("expected a number", path)
    if isinstance(v, (int, float, str)):
        try:
            return Fraction(v)
        except (ValueError, ZeroDivisionError):
            raise ConfigError(f"cannot parse numeric literal {v!r}", path) from None
    raise ConfigError("expected a number", path)


def _removal(v: Any, path: str):
    k = _Keys(_expect_dict(v, path), path)
    kind = k.take("kind", required=True)
    if kind == "constant":
        rule = ConstantRemoval(_exact_number(k.take("ratio", required=True), path + ".ratio"))
    elif kind == "geometric":
        rule = GeometricRemoval(
            _exact_number(k.take("first", required=True), path + ".first"),
            _exact_number(k.take("factor", required=True), path + ".factor"),
        )
    else:
        raise ConfigError(f"unknown removal kind {kind!r}", path)
    k.done()
    return rule


def _component(v: Any, path: str, carrier: Interval):
    k = _Keys(_expect_dict(v, path), path)
    kind = k.take("kind", required=True)
    out: Any
    if kind == "lebesgue":
        c = _number(k.take("density", 1.0), path + ".density")
        support = k.take("support")
        iv = _interval(support, path + ".support") if support is not None else carrier
        out = ("segment", ConstDensity(iv, c))
    elif kind == "density":
        primitive = k.take("primitive", required=True)
        iv = _interval(k.take("support", required=True), path + ".support")
        c = _number(k.take("c", 1.0), path + ".c")
        if primitive == "const":
            out = ("segment", ConstDensity(iv, c))
        elif primitive == "power":
            out = (
                "segment",
                PowerDensity(
                    iv,
                    c,
                    _number(k.take("center", 0.0), path + ".center"),
                    _number(k.take("exponent", required=True), path + ".exponent"),
                ),
            )
        elif primitive == "exp_recip":
            out = (
                "segment",
                ExpRecipDensity(
                    iv,
                    c,
                    _number(k.take("center", 0.0), path + ".center"),
                    _number(k.take("rate", 1.0), path + ".rate"),
                    bool(k.take("mirrored", False)),
                ),
            )
        elif primitive == "cantor_complement":
            out = (
                "segment",
                CantorComplementDensity(iv, _removal(k.take("removal", required=True), path + ".removal"), c),
            )
        else:
            raise ConfigError(f"unknown density primitive {primitive!r}", path)
    elif kind == "atom":
        out = (
            "atom",
            Atom(_number(k.take("at", required=True), path + ".at"), _number(k.take("mass", required=True), path + ".mass")),
        )
    elif kind == "cantor":
        out = (
            "cantor",
            CantorComponent(
                _interval(k.take("support", required=True), path + ".support"),
                _removal(k.take("removal", required=True), path + ".removal"),
                _number(k.take("mass", 1.0), path + ".mass"),
                int(k.take("eval_depth", 52)),
            ),
        )
    elif kind == "cantor_tower":
        out = (
            "tower",
            CantorTower(
                _interval(k.take("support", required=True), path + ".support"),
                _removal(k.take("removal", required=True), path + ".removal"),
                _number(k.take("block_mass", 1.0), path + ".block_mass"),
                k.take("accumulate", "left") == "left",
                int(k.take("eval_depth", 52)),
            ),
        )
    else:
        raise ConfigError(f"unknown measure component kind {kind!r}", path)
    k.done()
    return out


def _measure(v: Any, path: str, carrier: Interval) -> MeasureSpec:
    comps = _expect_list(v, path)
    segments, atoms, cantors, towers = [], [], [], []
    for i, comp in enumerate(comps):
        tag, obj = _component(comp, f"{path}[{i}]", carrier)
        {"segment": segments, "atom": atoms, "cantor": cantors, "tower": towers}[tag].append(obj)
    try:
        return MeasureSpec(carrier, tuple(segments), tuple(atoms), tuple(cantors), tuple(towers))
    except ValueError as exc:
        raise ConfigError(str(exc), path) from None


def _scale(v: Any, path: str, domain: Interval, base_point: float | None) -> ScaleFunction:
    k = _Keys(_expect_dict(v, path), path)
    kind = k.take("kind", required=True)
    try:
        if kind == "linear":
            sc = ScaleFunction.natural(domain, base_point, _number(k.take("density", 1.0), path + ".density"))
        elif kind == "log":
            sc = ScaleFunction.log_scale(domain, base_point, _number(k.take("center", 0.0), path + ".center"))
        elif kind == "power":
            sc = ScaleFunction.power_scale(
                domain,
                _number(k.take("exponent", required=True), path + ".exponent"),
                base_point,
                _number(k.take("center", 0.0), path + ".center"),
            )
        elif kind == "neg_exp_recip":
            sc = ScaleFunction.neg_exp_recip(
                domain,
                base_point,
                _number(k.take("center", 0.0), path + ".center"),
                _number(k.take("rate", 1.0), path + ".rate"),
            )
        elif kind == "stieltjes":
            measure = _measure(k.take("measure", required=True), path + ".measure", domain)
            sc = ScaleFunction.from_measure(domain, measure, base_point)
        else:
            raise ConfigError(f"unknown scale kind {kind!r}", path)
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc), path) from None
    k.done()
    return sc


@dataclass(frozen=True)
class ConfigDocument:
    label: str
    spec: DiffusionSpec | None
    density: HamzaDensity | None
    test_function: TestFunction | None
    digest: str
    raw: dict


def _test_function(v: Any, path: str) -> TestFunction:
    k = _Keys(_expect_dict(v, path), path)
    pieces = []
    for i, p in enumerate(_expect_list(k.take("pieces", []), path + ".pieces")):
        pk = _Keys(_expect_dict(p, f"{path}.pieces[{i}]"), f"{path}.pieces[{i}]")
        idx = int(pk.take("interval", required=True))
        mode = pk.take("mode", "scale")
        knots = [
            (_number(pair[0], f"{path}.pieces[{i}].knots"), _number(pair[1], f"{path}.pieces[{i}].knots"))
            for pair in _expect_list(pk.take("knots", required=True), f"{path}.pieces[{i}].knots")
        ]
        pk.done()
        pieces.append(IntervalPiece(idx, tuple(knots), mode == "scale"))
    compact = bool(k.take("compact_support", True))
    k.done()
    return TestFunction(tuple(pieces), compact_support=compact)


def parse_document(text: str) -> ConfigDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON: {exc.msg}", "", exc.lineno, exc.colno) from None
    if not isinstance(raw, dict):
        raise ConfigError("top level must be an object")
    digest = hashlib.sha256(
        json.dumps(raw, sort_keys=True, separators=(",", ":")).encode()
    ).hexdigest()[:12]

    k = _Keys(raw, "")
    label = str(k.take("label", ""))

    density = None
    dens_raw = k.take("density")
    if dens_raw is not None:
        density = HamzaDensity(_measure(dens_raw, "density", Interval.real_line()))

    spec = None
    state_raw = k.take("state_space")
    if state_raw is not None:
        state = _interval(state_raw, "state_space")
        speed = _measure(k.take("speed_measure", required=True), "speed_measure", state)
        intervals: list[tuple[Interval, ScaleFunction]] = []
        families = ()
        for i, ei in enumerate(_expect_list(k.take("effective_intervals", []), "effective_intervals")):
            ek = _Keys(_expect_dict(ei, f"effective_intervals[{i}]"), f"effective_intervals[{i}]")
            iv = _interval(ek.take("interval", required=True), f"effective_intervals[{i}].interval")
            bp = ek.take("base_point")
            base = _number(bp, f"effective_intervals[{i}].base_point") if bp is not None else None
            sc = _scale(ek.take("scale", required=True), f"effective_intervals[{i}].scale", iv, base)
            ek.done()
            intervals.append((iv, sc))
        gs_raw = k.take("gap_system")
        if gs_raw is not None:
            gk = _Keys(_expect_dict(gs_raw, "gap_system"), "gap_system")
            support = _interval(gk.take("support", required=True), "gap_system.support")
            rule = _removal(gk.take("removal", required=True), "gap_system.removal")
            depth = int(gk.take("depth", 12))
            recipe = gk.take("scale", "natural")
            if recipe not in (NATURAL, NORMALIZED):
                raise ConfigError(f"unknown gap scale recipe {recipe!r}", "gap_system.scale")
            dens = _number(gk.take("density", 1.0), "gap_system.density")
            rays = bool(gk.take("rays", True))
            gk.done()
            gap_intervals, family = build_gap_system(
                support, rule, depth, recipe, dens, rays, index_offset=len(intervals)
            )
            intervals.extend(gap_intervals)
            families = (family,)
        killing_raw = k.take("killing")
        killing = _measure(killing_raw, "killing", state) if killing_raw is not None else None
        try:
            spec = DiffusionSpec.create(state, speed, intervals, killing, families)
        except ValueError as exc:
            raise ConfigError(str(exc), "effective_intervals") from None

    tf_raw = k.take("test_function")
    test_function = _test_function(tf_raw, "test_function") if tf_raw is not None else None
    k.done()
    return ConfigDocument(label, spec, density, test_function, digest, raw)


def load_document(path: str) -> ConfigDocument:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_document(fh.read())
