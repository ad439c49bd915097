"""Experiment description and its INI configuration format.

Layout (every section except ``[params]`` and ``[riemann]`` is optional)::

    [experiment]
    name = case1-region6-s1c2
    description = free text

    [params]
    A = -10
    gamma = -2
    k = 0.01
    eta = 3
    beta = 10

    [riemann]
    frame = transformed        ; or primitive (rho, u); identical at t = 0
    left = 1, 3
    right = 0.5, 8

    [solver]
    nx = 1000
    x_min = -300
    x_max = 700
    cfl = 0.5
    iterations = 20
    steps_per_iteration = 50
    renorm_interval = 100
    renorm_tol = 1e-7
    t_end =                    ; empty for fixed step counts

    [analyses]
    run = classify, curves, regions, solver, waveid, delta

    [output]
    dir = out
    format = csv               ; or json

    [curves]
    times = 0, 0.5, 1
    v_min = 0.05
    v_max = 4
    n = 200

    [regions]
    t = 0
    v_min = 0.05
    v_max = 4
    w_min = -20
    w_max = 20
    nv = 60
    nw = 60
    horizon = 3

    [delta]
    t_end = 2
"""

from __future__ import annotations

import configparser
import io
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

from ..llf import SolverConfig
from ..model import Direction, PhysParams, PrimState, TransState, change_frame, validate_params

ANALYSES = ("classify", "curves", "regions", "solver", "waveid", "delta")
# classification first so predictions are on record before the solver runs
ORDER = {name: i for i, name in enumerate(ANALYSES)}
FRAMES = ("transformed", "primitive")
FORMATS = ("csv", "json")


class ConfigError(ValueError):
    """Invalid experiment description."""


@dataclass(frozen=True)
class CurveSpec:
    times: tuple[float, ...] = (0.0, 0.5, 1.0)
    v_min: float = 0.05
    v_max: float = 4.0
    n: int = 200


@dataclass(frozen=True)
class RegionSpec:
    t: float = 0.0
    v_min: float = 0.05
    v_max: float = 4.0
    w_min: float = -20.0
    w_max: float = 20.0
    nv: int = 60
    nw: int = 60
    horizon: float = 3.0


@dataclass(frozen=True)
class Experiment:
    name: str
    params: PhysParams
    left: tuple[float, float]
    right: tuple[float, float]
    frame: str = "transformed"
    solver: SolverConfig = field(default_factory=SolverConfig)
    analyses: tuple[str, ...] = ("classify", "solver", "waveid")
    out_dir: str = "out"
    fmt: str = "csv"
    curves: CurveSpec = field(default_factory=CurveSpec)
    regions: RegionSpec = field(default_factory=RegionSpec)
    delta_t_end: float = 2.0
    description: str = ""

    def __post_init__(self):
        if self.frame not in FRAMES:
            raise ConfigError(f"frame must be one of {FRAMES}, got {self.frame!r}")
        if self.fmt not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.fmt!r}")
        bad = [a for a in self.analyses if a not in ORDER]
        if bad:
            raise ConfigError(f"unknown analyses {bad}; choose from {ANALYSES}")
        object.__setattr__(self, "analyses", tuple(self.ordered_analyses()))
        if "waveid" in self.analyses and "solver" not in self.analyses:
            raise ConfigError("waveid needs the solver analysis")
        if not self.delta_t_end > 0:
            raise ConfigError("delta t_end must be positive")
        # building the states checks positivity in the declared frame
        self.states()

    def states(self) -> tuple[TransState, TransState]:
        """Left and right data in the transformed frame."""
        try:
            if self.frame == "primitive":
                return tuple(change_frame(PrimState(*s), 0.0, self.params, Direction.PRIM_TO_TRANS)
                             for s in (self.left, self.right))
            return TransState(*self.left), TransState(*self.right)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def ordered_analyses(self) -> list[str]:
        return sorted(set(self.analyses), key=ORDER.__getitem__)

    def with_overrides(self, **solver_overrides) -> "Experiment":
        kw = {k: v for k, v in solver_overrides.items() if v is not None}
        if not kw:
            return self
        try:
            return replace(self, solver=replace(self.solver, **kw))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "description": self.description,
            "params": {k: self.params.as_dict()[k] for k in ("A", "gamma", "k", "eta", "beta")},
            "riemann": {"frame": self.frame, "left": list(self.left), "right": list(self.right)},
            "solver": asdict(self.solver),
            "analyses": self.ordered_analyses(),
            "output": {"dir": self.out_dir, "format": self.fmt},
            "curves": asdict(self.curves),
            "regions": asdict(self.regions),
            "delta": {"t_end": self.delta_t_end},
        }


def _pair(text: str, key: str) -> tuple[float, float]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise ConfigError(f"{key} needs two comma-separated numbers, got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise ConfigError(f"{key}: {exc}") from exc


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(p) for p in text.split(",") if p.strip())


def _section(cp, name, spec, cls):
    if not cp.has_section(name):
        return spec
    sec = cp[name]
    kw = {}
    for key, default in asdict(spec).items():
        if key not in sec:
            continue
        raw = sec[key].strip()
        if isinstance(default, tuple):
            kw[key] = _floats(raw)
        elif isinstance(default, int) and not isinstance(default, bool):
            kw[key] = int(raw)
        else:
            kw[key] = float(raw)
    return cls(**{**asdict(spec), **kw})


def parse(text: str, source: str = "<string>") -> Experiment:
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        cp.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc
    for sec in ("params", "riemann"):
        if not cp.has_section(sec):
            raise ConfigError(f"missing [{sec}] section")
    try:
        p = cp["params"]
        params = validate_params(*(float(p[key]) for key in ("A", "gamma", "k", "eta", "beta")))
        r = cp["riemann"]
        left, right = _pair(r["left"], "left"), _pair(r["right"], "right")
        frame = r.get("frame", "transformed").strip()
        solver = SolverConfig()
        if cp.has_section("solver"):
            s = cp["solver"]
            kw = {}
            for key, default in asdict(solver).items():
                if key not in s:
                    continue
                raw = s[key].strip()
                if key == "t_end":
                    kw[key] = float(raw) if raw else None
                elif isinstance(default, int):
                    kw[key] = int(raw)
                else:
                    kw[key] = float(raw)
            solver = SolverConfig(**kw)
        analyses = ("classify", "solver", "waveid")
        if cp.has_section("analyses") and "run" in cp["analyses"]:
            analyses = tuple(a.strip() for a in cp["analyses"]["run"].split(",") if a.strip())
        out = cp["output"] if cp.has_section("output") else {}
        exp = cp["experiment"] if cp.has_section("experiment") else {}
        delta_t = float(cp["delta"]["t_end"]) if cp.has_section("delta") and "t_end" in cp["delta"] else 2.0
        return Experiment(
            name=exp.get("name", Path(source).stem if source != "<string>" else "experiment"),
            description=exp.get("description", ""),
            params=params, left=left, right=right, frame=frame, solver=solver,
            analyses=analyses, out_dir=out.get("dir", "out"), fmt=out.get("format", "csv"),
            curves=_section(cp, "curves", CurveSpec(), CurveSpec),
            regions=_section(cp, "regions", RegionSpec(), RegionSpec),
            delta_t_end=delta_t,
        )
    except KeyError as exc:
        raise ConfigError(f"missing key {exc}") from exc
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def load(path: str | Path) -> Experiment:
    path = Path(path)
    return parse(path.read_text(), str(path))


def dump(exp: Experiment) -> str:
    """INI text that :func:`parse` turns back into ``exp``."""
    d = exp.to_dict()
    cp = configparser.ConfigParser()
    cp.optionxform = str
    cp["experiment"] = {"name": exp.name, "description": exp.description}
    cp["params"] = {k: repr(float(v)) for k, v in d["params"].items()}
    cp["riemann"] = {"frame": exp.frame, "left": ", ".join(repr(float(x)) for x in exp.left),
                     "right": ", ".join(repr(float(x)) for x in exp.right)}
    cp["solver"] = {k: ("" if v is None else repr(v)) for k, v in d["solver"].items()}
    cp["analyses"] = {"run": ", ".join(d["analyses"])}
    cp["output"] = {"dir": exp.out_dir, "format": exp.fmt}
    cp["curves"] = {k: (", ".join(repr(float(x)) for x in v) if isinstance(v, tuple) else repr(v))
                    for k, v in asdict(exp.curves).items()}
    cp["regions"] = {k: repr(v) for k, v in asdict(exp.regions).items()}
    cp["delta"] = {"t_end": repr(exp.delta_t_end)}
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()
