"""Run configuration: TOML file -> curve, cover, M and an optional base point."""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from typing import Optional

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .cover import CoverModel
from .curve import INFINITY, DEFAULT_EXTENSION_CAP, Divisor, HyperCurve, validate_curve
from .errors import ConfigError, NRBraneError
from .exactfield import Poly, field, is_prime
from .picard import PicClass, class_of_divisor
from .spectral import BasePoint, HitchinBase

FORMATS = ("json", "csv", "table")


@dataclass
class RunConfig:
    p: int
    f: list
    genus: int
    S: list
    M_points: list = dc_field(default_factory=list)  # [[x, y, mult], ...]
    M_inf: Optional[int] = None
    seed: int = 0
    ext_cap: int = DEFAULT_EXTENSION_CAP
    format: str = "table"
    a: Optional[list] = None
    b: Optional[list] = None

    @property
    def M_inf_mult(self) -> int:
        if self.M_inf is not None:
            return self.M_inf
        used = sum(pt[2] if len(pt) > 2 else 1 for pt in self.M_points)
        return self.genus - 1 - used


def _poly_from_roots(p, roots):
    F = field(p)
    return Poly.from_roots(p, [F(r) for r in roots])


def desk_config(g: int = 2) -> RunConfig:
    """The two reference setups: g = 2 over F_11 and g = 3 over F_13."""
    if g == 2:
        f = _poly_from_roots(11, range(5))
        return RunConfig(p=11, f=[int(c) for c in f.coeffs], genus=2, S=[0, 1])
    if g == 3:
        f = _poly_from_roots(13, range(7))
        return RunConfig(p=13, f=[int(c) for c in f.coeffs], genus=3, S=[0, 1, 2, 3])
    raise ConfigError(f"no reference configuration for genus {g}")


def _int_list(raw, key):
    if not isinstance(raw, list) or not all(isinstance(v, int) for v in raw):
        raise ConfigError(f"'{key}' must be a list of integers")
    return list(raw)


def parse_config(data: dict) -> RunConfig:
    known = {"p", "f", "roots", "genus", "S", "M", "seed", "ext_cap", "format", "a", "b"}
    extra = set(data) - known
    if extra:
        raise ConfigError(f"unknown keys: {sorted(extra)}")
    for key in ("p", "genus", "S"):
        if key not in data:
            raise ConfigError(f"missing key '{key}'")
    p = data["p"]
    if not isinstance(p, int) or not is_prime(p):
        raise ConfigError(f"p = {p!r} is not a prime")
    if "f" in data and "roots" in data:
        raise ConfigError("give either 'f' or 'roots', not both")
    if "f" in data:
        f = _int_list(data["f"], "f")
    elif "roots" in data:
        f = [int(c) for c in _poly_from_roots(p, _int_list(data["roots"], "roots")).coeffs]
    else:
        raise ConfigError("missing key 'f' (or 'roots')")
    M = data.get("M", {})
    if not isinstance(M, dict):
        raise ConfigError("'M' must be a table")
    pts = M.get("points", [])
    if not isinstance(pts, list) or not all(
        isinstance(pt, list) and len(pt) in (2, 3) and all(isinstance(v, int) for v in pt) for pt in pts
    ):
        raise ConfigError("'M.points' must be a list of [x, y] or [x, y, mult]")
    fmt = data.get("format", "table")
    if fmt not in FORMATS:
        raise ConfigError(f"format must be one of {FORMATS}")
    cfg = RunConfig(
        p=p,
        f=f,
        genus=data["genus"],
        S=_int_list(data["S"], "S"),
        M_points=pts,
        M_inf=M.get("inf"),
        seed=data.get("seed", 0),
        ext_cap=data.get("ext_cap", DEFAULT_EXTENSION_CAP),
        format=fmt,
        a=_int_list(data["a"], "a") if "a" in data else None,
        b=_int_list(data["b"], "b") if "b" in data else None,
    )
    return cfg


def load_config(path) -> RunConfig:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return parse_config(data)


@dataclass
class Setup:
    """Everything a command needs, built and validated from a RunConfig."""

    config: RunConfig
    curve: HyperCurve
    model: CoverModel
    hitchin: HitchinBase
    M_divisor: Divisor
    M: PicClass

    def base_point(self, rng: random.Random = None, max_tries: int = 200) -> BasePoint:
        cfg = self.config
        if cfg.b is not None:
            a = cfg.a if cfg.a is not None else [0] * len(self.hitchin.basis_a)
            try:
                return self.hitchin.base_point(a, cfg.b)
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc
        rng = rng or random.Random(cfg.seed)
        return self.hitchin.sample(rng, max_tries)


def build(cfg: RunConfig) -> Setup:
    """Validate the configuration; every failure surfaces as ConfigError."""
    try:
        C = validate_curve(Poly(cfg.p, cfg.f), cfg.genus, cap=cfg.ext_cap)
        if not cfg.S or len(set(cfg.S)) != len(cfg.S) or not all(0 <= i <= 2 * cfg.genus for i in cfg.S):
            raise ConfigError(f"S = {cfg.S} must be distinct indices in [0, {2 * cfg.genus}]")
        model = CoverModel(C, cfg.S)
        terms = {}
        for pt in cfg.M_points:
            P = C.point(pt[0], pt[1])
            terms[P] = terms.get(P, 0) + (pt[2] if len(pt) > 2 else 1)
        terms[INFINITY] = terms.get(INFINITY, 0) + cfg.M_inf_mult
        MD = Divisor(terms)
        if MD.degree != cfg.genus - 1:
            raise ConfigError(f"deg M = {MD.degree}, expected {cfg.genus - 1}")
        hitchin = HitchinBase(model)
    except ConfigError:
        raise
    except (NRBraneError, ValueError) as exc:
        raise ConfigError(f"{type(exc).__name__}: {exc}") from exc
    return Setup(cfg, C, model, hitchin, MD, class_of_divisor(C, MD))

