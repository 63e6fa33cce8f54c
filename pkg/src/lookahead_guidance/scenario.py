"""Scenario and envelope-study configuration: strict key=value documents.

Documents are INI-style sectioned text. Angles are written in degrees and
converted to radians at parse time; every key is validated against a
whitelist, so misspelled keys fail loudly instead of silently falling back
to defaults. Two shipped presets cover the straight-line and elliptic case
studies.
"""

from __future__ import annotations

import configparser
import io
import math
from dataclasses import dataclass

from .envelope import GridSpec
from .errors import ParseError, ValidationError
from .guidance import (
    ConstantLookahead,
    GuidanceLimits,
    LookaheadProfile,
    VariableLookahead,
)
from .paths import CCW, CW, Circle, Ellipse, PathModel, StraightLine
from .simulation import RK4, SimConfig, VehicleState

_SCENARIO_SECTIONS = ("path", "limits", "profile", "init", "sim")
_ENVELOPE_SECTIONS = ("grid", "limits", "profile")

_PATH_KEYS = {
    "line": {"type", "anchor_x", "anchor_y", "heading_deg"},
    "circle": {"type", "center_x", "center_y", "radius", "traversal"},
    "ellipse": {"type", "center_x", "center_y", "semi_major", "semi_minor",
                "traversal"},
}
_LIMITS_KEYS = {"V_u", "R_min", "eps_proj"}
_PROFILE_KEYS = {
    "constant": {"type", "L0"},
    "variable": {"type", "L_min", "L_max", "d_c"},
}
_INIT_KEYS = {"x", "y", "psi_deg"}
_SIM_KEYS = {"dt", "t_f", "integrator", "settle_eps"}
_GRID_KEYS = {"d_min", "d_max", "eta_min_deg", "eta_max_deg", "n_d", "n_eta",
              "kappa"}


@dataclass(frozen=True)
class Scenario:
    """One simulation setup; two profiles switch on comparison mode."""

    path: PathModel
    limits: GuidanceLimits
    profiles: tuple[LookaheadProfile, ...]
    init: VehicleState
    sim: SimConfig


@dataclass(frozen=True)
class EnvelopeConfig:
    """Grid, limits, and the two profiles of an envelope comparison."""

    grid: GridSpec
    limits: GuidanceLimits
    profiles: tuple[LookaheadProfile, ...]


class _Section:
    """Key access with strict whitelisting and key-named errors."""

    def __init__(self, name: str, items: dict[str, str]):
        self.name = name
        self.items = dict(items)

    def check_keys(self, allowed: set[str]) -> None:
        unknown = set(self.items) - allowed
        if unknown:
            raise ParseError(
                f"unknown key(s) in [{self.name}]: {', '.join(sorted(unknown))}"
            )

    def raw(self, key: str, default: str | None = None) -> str | None:
        if key in self.items:
            return self.items[key].strip()
        return default

    def require(self, key: str) -> str:
        if key not in self.items:
            raise ParseError(f"[{self.name}] is missing required key '{key}'")
        return self.items[key].strip()

    def number(self, key: str, default: float | None = None) -> float | None:
        raw = self.raw(key)
        if raw is None:
            return default
        try:
            return float(raw)
        except ValueError as exc:
            raise ParseError(f"[{self.name}] {key}: not a number: {raw!r}") from exc

    def require_number(self, key: str) -> float:
        self.require(key)
        return self.number(key)

    def integer(self, key: str, default: int) -> int:
        raw = self.raw(key)
        if raw is None:
            return default
        try:
            return int(raw)
        except ValueError as exc:
            raise ParseError(f"[{self.name}] {key}: not an integer: {raw!r}") from exc


def _read_sections(text: str, required: tuple[str, ...],
                   optional: tuple[str, ...]) -> dict[str, _Section]:
    parser = configparser.ConfigParser(interpolation=None, strict=True)
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ParseError(f"malformed document: {exc}") from exc
    sections = {name: _Section(name, dict(parser.items(name)))
                for name in parser.sections()}
    allowed = set(required) | set(optional)
    unknown = set(sections) - allowed
    if unknown:
        raise ParseError(f"unknown section(s): {', '.join(sorted(unknown))}")
    missing = set(required) - set(sections)
    if missing:
        raise ParseError(f"missing section(s): {', '.join(sorted(missing))}")
    return sections


def _positive(section: str, key: str, value: float) -> float:
    if not value > 0.0:
        raise ValidationError(f"[{section}] {key}: must be strictly positive")
    return value


def _parse_path(sec: _Section) -> PathModel:
    kind = sec.require("type").lower()
    if kind not in _PATH_KEYS:
        raise ParseError(f"[path] type must be line, circle, or ellipse, got {kind!r}")
    sec.check_keys(_PATH_KEYS[kind])
    if kind == "line":
        heading = math.radians(sec.require_number("heading_deg"))
        return StraightLine(
            anchor=(sec.require_number("anchor_x"), sec.require_number("anchor_y")),
            direction=(math.cos(heading), math.sin(heading)),
        )
    traversal = sec.raw("traversal", CCW).lower()
    if traversal not in (CCW, CW):
        raise ValidationError(f"[path] traversal: must be '{CCW}' or '{CW}'")
    center = (sec.require_number("center_x"), sec.require_number("center_y"))
    if kind == "circle":
        radius = _positive("path", "radius", sec.require_number("radius"))
        return Circle(center=center, radius=radius, traversal=traversal)
    a = _positive("path", "semi_major", sec.require_number("semi_major"))
    b = _positive("path", "semi_minor", sec.require_number("semi_minor"))
    if a < b:
        raise ValidationError("[path] semi_major: must be >= semi_minor")
    return Ellipse(center=center, a=a, b=b, traversal=traversal)


def _parse_limits(sec: _Section) -> GuidanceLimits:
    sec.check_keys(_LIMITS_KEYS)
    v_u = _positive("limits", "V_u", sec.require_number("V_u"))
    r_min = _positive("limits", "R_min", sec.require_number("R_min"))
    eps_proj = sec.number("eps_proj")
    if eps_proj is not None and eps_proj < 0.0:
        raise ValidationError("[limits] eps_proj: must be nonnegative")
    return GuidanceLimits(V_u=v_u, R_min=r_min, eps_proj=eps_proj)


def _parse_profile(sec: _Section) -> LookaheadProfile:
    kind = sec.require("type").lower()
    if kind not in _PROFILE_KEYS:
        raise ParseError(
            f"[{sec.name}] type must be constant or variable, got {kind!r}"
        )
    sec.check_keys(_PROFILE_KEYS[kind])
    if kind == "constant":
        return ConstantLookahead(
            L0=_positive(sec.name, "L0", sec.require_number("L0"))
        )
    l_min = _positive(sec.name, "L_min", sec.require_number("L_min"))
    l_max = sec.require_number("L_max")
    if l_max < l_min:
        raise ValidationError(f"[{sec.name}] L_max: must be >= L_min")
    d_c = _positive(sec.name, "d_c", sec.require_number("d_c"))
    return VariableLookahead(L_min=l_min, L_max=l_max, d_c=d_c)


def _parse_sim(sec: _Section, path: PathModel) -> SimConfig:
    sec.check_keys(_SIM_KEYS)
    default_t_f = 60.0 if isinstance(path, StraightLine) else 120.0
    dt = sec.number("dt", 0.01)
    t_f = sec.number("t_f", default_t_f)
    integrator = sec.raw("integrator", RK4)
    settle_eps = sec.number("settle_eps")
    try:
        return SimConfig(t_f=t_f, dt=dt, integrator=integrator,
                         settle_eps=settle_eps)
    except ValueError as exc:
        raise ValidationError(f"[sim] {exc}") from exc


def parse_scenario(text: str) -> Scenario:
    """Parse and fully validate a scenario document.

    Raises
    ------
    ParseError
        Malformed text, unknown sections or keys, missing required keys.
    ValidationError
        Well-formed values that violate an invariant; the message names the
        offending key.
    """
    sections = _read_sections(text, _SCENARIO_SECTIONS, ("profile2",))
    path = _parse_path(sections["path"])
    limits = _parse_limits(sections["limits"])
    profiles = [_parse_profile(sections["profile"])]
    if "profile2" in sections:
        profiles.append(_parse_profile(sections["profile2"]))
    init_sec = sections["init"]
    init_sec.check_keys(_INIT_KEYS)
    init = VehicleState(
        x=init_sec.require_number("x"),
        y=init_sec.require_number("y"),
        psi=math.radians(init_sec.require_number("psi_deg")),
    )
    sim = _parse_sim(sections["sim"], path)
    return Scenario(path=path, limits=limits, profiles=tuple(profiles),
                    init=init, sim=sim)


def parse_envelope_config(text: str) -> EnvelopeConfig:
    """Parse an envelope-study document ([grid], [limits], [profile], [profile2])."""
    sections = _read_sections(text, _ENVELOPE_SECTIONS, ("profile2",))
    grid_sec = sections["grid"]
    grid_sec.check_keys(_GRID_KEYS)
    try:
        grid = GridSpec(
            d_min=grid_sec.number("d_min", 0.0),
            d_max=grid_sec.number("d_max", 200.0),
            eta_min=math.radians(grid_sec.number("eta_min_deg", -180.0)),
            eta_max=math.radians(grid_sec.number("eta_max_deg", 180.0)),
            n_d=grid_sec.integer("n_d", 1000),
            n_eta=grid_sec.integer("n_eta", 1000),
            kappa=grid_sec.number("kappa", 0.0),
        )
    except ValueError as exc:
        raise ValidationError(f"[grid] {exc}") from exc
    limits = _parse_limits(sections["limits"])
    profiles = [_parse_profile(sections["profile"])]
    if "profile2" in sections:
        profiles.append(_parse_profile(sections["profile2"]))
    return EnvelopeConfig(grid=grid, limits=limits, profiles=tuple(profiles))


def _write_profile(out: io.StringIO, name: str, profile: LookaheadProfile) -> None:
    out.write(f"[{name}]\n")
    if isinstance(profile, ConstantLookahead):
        out.write("type = constant\n")
        out.write(f"L0 = {profile.L0!r}\n")
    else:
        out.write("type = variable\n")
        out.write(f"L_min = {profile.L_min!r}\n")
        out.write(f"L_max = {profile.L_max!r}\n")
        out.write(f"d_c = {profile.d_c!r}\n")
    out.write("\n")


def serialize_scenario(scenario: Scenario) -> str:
    """Canonical text form; ``parse_scenario`` round-trips it exactly."""
    out = io.StringIO()
    path = scenario.path
    out.write("[path]\n")
    if isinstance(path, StraightLine):
        out.write("type = line\n")
        out.write(f"anchor_x = {float(path.anchor[0])!r}\n")
        out.write(f"anchor_y = {float(path.anchor[1])!r}\n")
        heading = math.degrees(math.atan2(path.direction[1], path.direction[0]))
        out.write(f"heading_deg = {heading!r}\n")
    elif isinstance(path, Circle):
        out.write("type = circle\n")
        out.write(f"center_x = {float(path.center[0])!r}\n")
        out.write(f"center_y = {float(path.center[1])!r}\n")
        out.write(f"radius = {path.radius!r}\n")
        out.write(f"traversal = {path.traversal}\n")
    else:
        out.write("type = ellipse\n")
        out.write(f"center_x = {float(path.center[0])!r}\n")
        out.write(f"center_y = {float(path.center[1])!r}\n")
        out.write(f"semi_major = {path.a!r}\n")
        out.write(f"semi_minor = {path.b!r}\n")
        out.write(f"traversal = {path.traversal}\n")
    out.write("\n[limits]\n")
    out.write(f"V_u = {scenario.limits.V_u!r}\n")
    out.write(f"R_min = {scenario.limits.R_min!r}\n")
    if scenario.limits.eps_proj is not None:
        out.write(f"eps_proj = {scenario.limits.eps_proj!r}\n")
    out.write("\n")
    _write_profile(out, "profile", scenario.profiles[0])
    if len(scenario.profiles) > 1:
        _write_profile(out, "profile2", scenario.profiles[1])
    out.write("[init]\n")
    out.write(f"x = {scenario.init.x!r}\n")
    out.write(f"y = {scenario.init.y!r}\n")
    out.write(f"psi_deg = {math.degrees(scenario.init.psi)!r}\n")
    out.write("\n[sim]\n")
    out.write(f"dt = {scenario.sim.dt!r}\n")
    out.write(f"t_f = {scenario.sim.t_f!r}\n")
    out.write(f"integrator = {scenario.sim.integrator}\n")
    if scenario.sim.settle_eps is not None:
        out.write(f"settle_eps = {scenario.sim.settle_eps!r}\n")
    return out.getvalue()


def preset_scenario(name: str) -> Scenario:
    """Shipped case-study setups: straight_line_table2 and ellipse_table2."""
    if name == "straight_line_table2":
        return Scenario(
            path=StraightLine(anchor=(0.0, 0.0), direction=(1.0, 0.0)),
            limits=GuidanceLimits(V_u=12.0, R_min=60.0),
            profiles=(
                ConstantLookahead(L0=40.0),
                VariableLookahead(L_min=40.0, L_max=82.0, d_c=32.0),
            ),
            init=VehicleState(x=-150.0, y=50.0, psi=math.radians(90.0)),
            sim=SimConfig(t_f=60.0, dt=0.01, integrator=RK4),
        )
    if name == "ellipse_table2":
        return Scenario(
            path=Ellipse(center=(0.0, 0.0), a=180.0, b=110.0, traversal=CCW),
            limits=GuidanceLimits(V_u=12.0, R_min=30.0),
            profiles=(
                ConstantLookahead(L0=22.0),
                VariableLookahead(L_min=22.0, L_max=100.0, d_c=20.0),
            ),
            init=VehicleState(x=250.0, y=120.0, psi=math.radians(150.0)),
            sim=SimConfig(t_f=120.0, dt=0.01, integrator=RK4),
        )
    raise ValidationError(
        f"unknown preset {name!r}; available: straight_line_table2, ellipse_table2"
    )


PRESET_NAMES = ("straight_line_table2", "ellipse_table2")


def paper_envelope_config() -> EnvelopeConfig:
    """Reference envelope study: V=50 m/s, R_min=100 m, look-ahead 50->150 m
    over d_c=30 m, evaluated along the minimum-radius arc (kappa = 1/R_min)."""
    return EnvelopeConfig(
        grid=GridSpec(d_min=0.0, d_max=200.0, eta_min=-math.pi,
                      eta_max=math.pi, n_d=1000, n_eta=1000, kappa=0.01),
        limits=GuidanceLimits(V_u=50.0, R_min=100.0),
        profiles=(
            ConstantLookahead(L0=50.0),
            VariableLookahead(L_min=50.0, L_max=150.0, d_c=30.0),
        ),
    )
