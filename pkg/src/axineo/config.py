"""
Run configuration: a flat ``key = value`` text file.

Blank lines and ``#`` comments are ignored. Every key must appear in
:data:`KEYS`; values are parsed by the listed type, lists are
comma-separated. Unknown or repeated keys are errors.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError
from .grid import ANNULUS, AXIS, DOMAIN_KINDS, DomainSpec
from .material import MaterialLaw
from .solve import SolveOptions

EXPERIMENTS = ("annulus-minimize", "affine-check", "axis-concentration", "diagnose-field")
BC_KINDS = ("affine", "taper")
START_KINDS = ("identity", "affine", "perturbed-affine", "taper")


def _float_list(text: str) -> list[float]:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise ValueError("empty list")
    return [float(p) for p in parts]


def _opt_float(text: str):
    return None if text.strip().lower() in ("none", "") else float(text)


# key -> (parser, default); a default of ... marks a required key
KEYS = {
    "experiment": (str, ...),
    "output_dir": (str, "out"),
    "threads": (int, 1),
    "domain.kind": (str, ANNULUS),
    "domain.r_min": (float, 1.0),
    "domain.r_max": (float, 2.0),
    "domain.z_min": (float, 0.0),
    "domain.z_max": (float, 1.0),
    "domain.nr": (int, 33),
    "domain.nz": (int, 33),
    "domain.quad_order": (int, 1),
    "material.alpha": (float, 1.0),
    "material.beta": (float, 1.0),
    "material.tau": (float, 1.0),
    "material.s": (float, 1.0),
    "bc.kind": (str, "affine"),
    "bc.lambda": (float, 1.0),
    "bc.b_z": (float, 0.0),
    "bc.stretch": (float, 0.2),
    "bc.shear": (float, 0.1),
    "start.kind": (str, "perturbed-affine"),
    "start.amplitude": (float, 0.1),
    "start.noise": (float, 0.0),
    "solve.max_iters": (int, 2000),
    "solve.grad_tol": (float, SolveOptions.grad_tol),
    "solve.step_init": (float, SolveOptions.step_init),
    "solve.backtrack_factor": (float, SolveOptions.backtrack_factor),
    "solve.armijo_c": (float, SolveOptions.armijo_c),
    "solve.memory": (int, SolveOptions.memory),
    "solve.M_bound": (_opt_float, None),
    "solve.seed": (int, 0),
    "pinch_epsilons": (_float_list, [0.2, 0.1, 0.05]),
    "pinch.a0": (float, 0.5),
    "field_path": (str, None),
    "diagnostics.n_tests": (int, 12),
    "diagnostics.deltas": (_float_list, [0.05, 0.1, 0.2]),
    "diagnostics.raster_resolution": (int, 256),
    "diagnostics.em_quad_order": (int, 5),
}


@dataclass
class RunConfig:
    experiment: str
    domain: DomainSpec
    material: MaterialLaw
    solve: SolveOptions
    values: dict

    def __getitem__(self, key):
        return self.values[key]

    @property
    def output_dir(self) -> Path:
        return Path(self.values["output_dir"])

    def resolved(self) -> dict:
        """Every key with its effective value, for embedding in reports."""
        return dict(sorted(self.values.items()))


def parse_text(text: str, source: str = "<config>") -> dict:
    raw = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in raw:
            raise ConfigError(f"{source}:{lineno}: key {key!r} given twice")
        parser = KEYS[key][0]
        try:
            raw[key] = parser(value)
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: bad value for {key!r}: {exc}") from None
    return raw


def build_config(raw: dict, overrides: dict | None = None) -> RunConfig:
    values = {}
    for key, (_, default) in KEYS.items():
        if key in raw:
            values[key] = raw[key]
        elif default is ...:
            raise ConfigError(f"missing required key {key!r}")
        else:
            values[key] = list(default) if isinstance(default, list) else default
    for key, value in (overrides or {}).items():
        if key not in KEYS:
            raise ConfigError(f"unknown key {key!r}")
        values[key] = value

    exp = values["experiment"]
    if exp not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {exp!r}; expected one of {', '.join(EXPERIMENTS)}")
    if values["domain.kind"] not in DOMAIN_KINDS:
        raise ConfigError(f"domain.kind must be one of {', '.join(DOMAIN_KINDS)}")
    if values["bc.kind"] not in BC_KINDS:
        raise ConfigError(f"bc.kind must be one of {', '.join(BC_KINDS)}")
    if values["start.kind"] not in START_KINDS:
        raise ConfigError(f"start.kind must be one of {', '.join(START_KINDS)}")
    if values["threads"] < 1:
        raise ConfigError("threads must be at least 1")
    if values["domain.kind"] == AXIS and "domain.r_min" not in raw:
        values["domain.r_min"] = 0.0
    try:
        domain = DomainSpec(values["domain.kind"], values["domain.r_min"], values["domain.r_max"],
                            values["domain.z_min"], values["domain.z_max"], values["domain.nr"],
                            values["domain.nz"], values["domain.quad_order"])
        material = MaterialLaw(values["material.alpha"], values["material.beta"],
                               values["material.tau"], values["material.s"])
        solve = SolveOptions(max_iters=values["solve.max_iters"], grad_tol=values["solve.grad_tol"],
                             step_init=values["solve.step_init"], backtrack_factor=values["solve.backtrack_factor"],
                             armijo_c=values["solve.armijo_c"], memory=values["solve.memory"],
                             M_bound=values["solve.M_bound"], seed=values["solve.seed"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    if exp == "affine-check":
        if values["bc.kind"] != "affine":
            raise ConfigError("affine-check requires bc.kind = affine")
        if domain.kind != ANNULUS:
            raise ConfigError("affine-check requires an annulus-rect domain")
    if exp == "axis-concentration":
        if domain.kind != AXIS:
            raise ConfigError("axis-concentration requires an axis-rect domain")
        if any(not e > 0 for e in values["pinch_epsilons"]):
            raise ConfigError("pinch_epsilons must be positive")
    if exp == "diagnose-field" and not values["field_path"]:
        raise ConfigError("diagnose-field requires field_path")
    if any(not d > 0 for d in values["diagnostics.deltas"]):
        raise ConfigError("diagnostics.deltas must be positive")
    return RunConfig(exp, domain, material, solve, values)


def load_config(path, overrides: dict | None = None) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return build_config(parse_text(text, str(path)), overrides)
