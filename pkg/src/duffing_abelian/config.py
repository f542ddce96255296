"""Run configuration: defaults, then a ``key = value`` file, then
``DUFFING_ABELIAN_<KEY>`` environment variables, then command-line flags."""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from .errors import DomainError
from .level_curve import DEFAULT_RTOL
from .monodromy import RICHARDSON_TOL
from .picard_fuchs import ATOL, RTOL
from .zeros import DEFECT_TOL, KeyholeContour

ENV_PREFIX = "DUFFING_ABELIAN_"


@dataclass(frozen=True)
class RunConfig:
    quad_rtol: float = DEFAULT_RTOL
    ode_rtol: float = RTOL
    ode_atol: float = ATOL
    extrap_tol: float = RICHARDSON_TOL
    defect_tol: float = DEFECT_TOL
    R: float = KeyholeContour.R
    delta: float = KeyholeContour.delta
    seed: int = 20240611
    out: str = "out"
    jobs: int = 0  # 0 means one per available core

    def __post_init__(self):
        for name in ("quad_rtol", "ode_rtol", "ode_atol", "extrap_tol", "defect_tol"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be strictly positive")
        if not self.R > 1:
            raise DomainError("R must exceed 1")
        if not 0 < self.delta < 0.125:
            raise DomainError("delta must lie in (0, 1/8)")
        if self.jobs < 0:
            raise DomainError("jobs must be non-negative")

    @property
    def contour(self) -> KeyholeContour:
        return KeyholeContour(R=self.R, delta=self.delta, defect_tol=self.defect_tol)

    def as_dict(self) -> dict:
        return asdict(self)

    def updated(self, values: dict) -> "RunConfig":
        """Copy with string or typed ``values`` coerced to the field types."""
        types = {f.name: f.type for f in fields(self)}
        clean = {}
        for key, raw in values.items():
            if raw is None:
                continue
            if key not in types:
                raise DomainError(f"unknown configuration key {key!r}")
            kind = {"float": float, "int": int, "str": str}[types[key]]
            try:
                clean[key] = kind(raw)
            except ValueError as exc:
                raise DomainError(f"bad value for {key}: {raw!r}") from exc
        return replace(self, **clean)


def parse_config_text(text: str) -> dict:
    """``key = value`` lines; blank lines and ``#`` comments are ignored."""
    out = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"config line {n}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key] = value
    return out


def env_overrides(environ=None) -> dict:
    environ = os.environ if environ is None else environ
    names = {f.name for f in fields(RunConfig)}
    out = {}
    for key, value in environ.items():
        if key.startswith(ENV_PREFIX):
            name = key[len(ENV_PREFIX):]
            name = name if name == "R" else name.lower()
            if name in names:
                out[name] = value
    return out


def load_config(path: str | Path | None = None, flags: dict | None = None,
                environ=None) -> RunConfig:
    cfg = RunConfig()
    if path is not None:
        cfg = cfg.updated(parse_config_text(Path(path).read_text()))
    cfg = cfg.updated(env_overrides(environ))
    return cfg.updated(flags or {})
