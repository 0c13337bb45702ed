"""TOML scenario files.

A file holds optional ``[defaults]`` and any number of ``[[scenario]]``
tables. Complex numbers are written as a number or a ``[re, im]`` pair.

    [[scenario]]
    id = "bidisc-flat"
    theorem = "main1-1"
    domains = [{kind = "disk", center = 0, radius = 1}, {kind = "disk"}]
    basepoint = [0, 0]
    p = [2, 2]
    phi = [{preset = "zero"}, {preset = "gaussian_bump", a = 0.5}]
    c = {kind = "exponential", a = 0.5}
    ideal = {kind = "box", beta = [1, 0]}
    target = [{alpha = [1, 0], coeff = 1}]
    N = 16
    resolution = {boundary = 512, radial = 48, angular = 128}
    relation = {kind = "equality", tol = 1e-4}
    sweep = [16, 24, 32]
"""
from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

from ..geometry import Annulus, Disk, ProductDomain
from ..green import HarmonicSeries
from ..jets import BoxIdeal, JetIdeal, JetTarget, MaximalIdeal, MultiplierIdeal
from ..kernels import Resolution
from ..weights import (
    Affine,
    Constant,
    Exponential,
    GaussianBump,
    HarmonicLogPower,
    LogAbsPoly,
    WeightSpec,
    Zero,
    tuned_log_power,
)

THEOREMS = (
    "main1-1",
    "main1-2",
    "main2-1",
    "main2-2",
    "main2-3",
    "main2-4",
    "saitoh-strict",
    "saitoh-1d",
    "higher-jet",
    "prod-S",
    "prod-B",
    "app1",
    "m2-oracle",
    "concavity",
)

# documented defaults; every one can be overridden per scenario or in [defaults]
DEFAULT_TOL = {"equality": 1e-4, "inequality": 1e-6, "strict-gap": 0.0, "bound": 1e-6}
DEFAULT_N = 16


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Relation:
    kind: str  # equality | inequality | strict-gap | bound
    tol: float
    target: float = 1.0
    gap_factor: float = 10.0


@dataclass(frozen=True)
class Scenario:
    id: str
    theorem: str
    domain: ProductDomain
    p: tuple[float, ...] | None
    weights: WeightSpec
    ideal: JetIdeal
    target: JetTarget
    N: int
    res: Resolution
    relation: Relation
    sweep: tuple[int, ...] = ()
    target_factors: tuple[dict, ...] | None = None
    extra: dict = field(default_factory=dict, compare=False)
    raw: dict = field(default_factory=dict, compare=False, repr=False)


def _complex(v, where: str) -> complex:
    if isinstance(v, (int, float, complex)) and not isinstance(v, bool):
        return complex(v)
    if isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
        return complex(v[0], v[1])
    raise ConfigError(f"{where}: expected a number or [re, im], got {v!r}")


def _domain(t: dict, where: str):
    kind = t.get("kind", "disk")
    center = _complex(t.get("center", 0), f"{where}.center")
    try:
        if kind == "disk":
            return Disk(center, float(t.get("radius", 1.0)))
        if kind == "annulus":
            return Annulus(center, float(t["r_inner"]), float(t.get("r_outer", 1.0)))
    except KeyError as exc:
        raise ConfigError(f"{where}: missing key {exc}") from None
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from None
    raise ConfigError(f"{where}: unknown domain kind {kind!r}")


def _harmonic(t: dict | None, center: complex) -> HarmonicSeries:
    if not t:
        return HarmonicSeries(center)
    coeffs = tuple((int(k), _complex(c, "u.coeffs")) for k, c in t.get("coeffs", []))
    return HarmonicSeries(center, float(t.get("a0", 0.0)), float(t.get("b0", 0.0)), coeffs)


def _phi(t: dict, d, z0: complex, where: str):
    preset = t.get("preset", "zero")
    if preset == "zero":
        return Zero()
    if preset == "harmonic_log_power":
        s = t.get("s", 0.0)
        if s == "tuned":
            if not isinstance(d, Annulus):
                raise ConfigError(f"{where}: s = 'tuned' needs an annulus factor")
            return tuned_log_power(d, z0, int(t.get("power", 1)), float(t.get("detune", 0.0)))
        return HarmonicLogPower(float(s))
    if preset == "log_abs_poly":
        poly = tuple(_complex(c, f"{where}.poly") for c in t.get("poly", [1.0]))
        return LogAbsPoly(poly, _harmonic(t.get("u"), d.center))
    if preset == "gaussian_bump":
        return GaussianBump(float(t.get("a", 0.0)))
    raise ConfigError(f"{where}: unknown phi preset {preset!r}")


def _cweight(t: dict | None, where: str):
    if not t:
        return Constant()
    kind = t.get("kind", "constant")
    try:
        if kind == "constant":
            return Constant()
        if kind == "exponential":
            return Exponential(float(t["a"]))
        if kind == "affine":
            return Affine(float(t["b"]))
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from None
    raise ConfigError(f"{where}: unknown c kind {kind!r}")


def _ideal(t: dict | None, n: int, p, where: str) -> JetIdeal:
    if not t or t.get("kind", "maximal") == "maximal":
        return MaximalIdeal(n)
    kind = t["kind"]
    if kind == "box":
        beta = tuple(int(b) for b in t.get("beta", [0] * n))
        if len(beta) != n:
            raise ConfigError(f"{where}: box corner has {len(beta)} entries for {n} factors")
        return BoxIdeal(beta)
    if kind == "multiplier":
        if p is None:
            raise ConfigError(f"{where}: multiplier ideal needs exponents p")
        return MultiplierIdeal(tuple(p))
    raise ConfigError(f"{where}: unknown ideal kind {kind!r}")


def _target(v, n: int, where: str) -> JetTarget:
    if v is None:
        return JetTarget.one(n)
    terms = {}
    for k, term in enumerate(v):
        alpha = tuple(int(a) for a in term["alpha"])
        if len(alpha) != n:
            raise ConfigError(f"{where}[{k}]: multi-index length {len(alpha)} for {n} factors")
        terms[alpha] = terms.get(alpha, 0) + _complex(term.get("coeff", 1.0), f"{where}[{k}].coeff")
    return JetTarget.from_dict(terms)


def _relation(t: dict | None, theorem: str, defaults: dict) -> Relation:
    t = dict(t or {})
    kind = t.get("kind")
    if kind is None:
        kind = {
            "saitoh-strict": "strict-gap",
            "main2-1": "inequality",
            "concavity": "bound",
        }.get(theorem, "equality")
    if kind not in DEFAULT_TOL:
        raise ConfigError(f"unknown relation kind {kind!r}")
    tol = float(t.get("tol", defaults.get("tol", {}).get(kind, DEFAULT_TOL[kind])))
    return Relation(kind, tol, float(t.get("target", 1.0)), float(t.get("gap_factor", 10.0)))


def parse_scenario(raw: dict, defaults: dict, index: int) -> Scenario:
    where = f"scenario[{index}]"
    merged = {**{k: v for k, v in defaults.items() if k != "tol"}, **raw}
    sid = merged.get("id")
    if not isinstance(sid, str) or not sid:
        raise ConfigError(f"{where}: every scenario needs a string id")
    where = f"scenario {sid!r}"
    theorem = merged.get("theorem")
    if theorem not in THEOREMS:
        raise ConfigError(f"{where}: unknown theorem tag {theorem!r}; expected one of {THEOREMS}")
    doms = merged.get("domains", [{"kind": "disk"}])
    factors = tuple(_domain(d, f"{where}.domains[{j}]") for j, d in enumerate(doms))
    n = len(factors)
    base = merged.get("basepoint", [d.center if isinstance(d, Disk) else None for d in factors])
    if any(b is None for b in base):
        raise ConfigError(f"{where}: annulus factors need an explicit basepoint")
    if len(base) != n:
        raise ConfigError(f"{where}: {n} factors but {len(base)} basepoint coordinates")
    base = tuple(_complex(b, f"{where}.basepoint") for b in base)
    try:
        pd = ProductDomain(factors, base)
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from None
    p = merged.get("p")
    p = tuple(float(x) for x in p) if p is not None else None
    if p is not None and len(p) != n:
        raise ConfigError(f"{where}: {n} factors but {len(p)} exponents")
    phis_raw = merged.get("phi", [{"preset": "zero"}] * n)
    if len(phis_raw) != n:
        raise ConfigError(f"{where}: {n} factors but {len(phis_raw)} phi presets")
    phis = tuple(_phi(t, d, z, f"{where}.phi[{j}]") for j, (t, d, z) in enumerate(zip(phis_raw, factors, base)))
    weights = WeightSpec(phis, _cweight(merged.get("c"), f"{where}.c"))
    ideal = _ideal(merged.get("ideal"), n, p, f"{where}.ideal")
    tf = merged.get("target_factors")
    target_factors = None
    if tf is not None:
        if len(tf) != n:
            raise ConfigError(f"{where}: target_factors needs one entry per factor")
        target_factors = tuple({int(k): _complex(c, f"{where}.target_factors") for k, c in f} for f in tf)
        target = JetTarget.product(target_factors)
    else:
        target = _target(merged.get("target"), n, f"{where}.target")
    res_t = merged.get("resolution", {})
    res = Resolution(
        int(res_t.get("boundary", Resolution.boundary)),
        int(res_t.get("radial", Resolution.radial)),
        int(res_t.get("angular", Resolution.angular)),
    )
    N = int(merged.get("N", DEFAULT_N))
    sweep = tuple(int(x) for x in merged.get("sweep", []))
    extra = {k: merged[k] for k in ("alphas", "ts", "expect_linear") if k in merged}
    return Scenario(
        sid,
        theorem,
        pd,
        p,
        weights,
        ideal,
        target,
        N,
        res,
        _relation(merged.get("relation"), theorem, defaults),
        sweep,
        target_factors,
        extra,
        raw,
    )


def load_config(path: str | Path) -> list[Scenario]:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        # the decoder message already carries "(at line L, column C)"
        raise ConfigError(f"{path}: {exc}") from None
    return parse_config(data)


def parse_config(data: dict[str, Any]) -> list[Scenario]:
    defaults = data.get("defaults", {})
    raws = data.get("scenario", [])
    if not isinstance(raws, list):
        raise ConfigError("'scenario' must be an array of tables ([[scenario]])")
    out = [parse_scenario(r, defaults, i) for i, r in enumerate(raws)]
    ids = [s.id for s in out]
    dup = {i for i in ids if ids.count(i) > 1}
    if dup:
        raise ConfigError(f"duplicate scenario ids: {sorted(dup)}")
    return out
