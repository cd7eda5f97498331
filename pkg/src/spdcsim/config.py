"""Run configuration: strict INI-style parsing, validation, serialization.

The format is flat ``[section]`` blocks with ``key = value`` lines and
``#`` comments. Unknown sections or keys are errors; every invariant
violation is reported with the ``section.key`` path. ``serialize_config``
prints floats with 17 significant digits, so parse(serialize(cfg)) == cfg
bit-exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .biphoton import DirectQuadrature, ScatterWindows
from .core import Axis
from .errors import ParseError, ValidationError
from .phasematch import ConstantIndex, CrystalConfig, SellmeierIndex
from .pump import GaussianPump, PlaneWavePump, PumpQuadrature

_SECTION_KEYS = {
    "pump": ("variant", "omega0", "sigma_omega", "waist"),
    "crystal": ("L", "pdc_type", "index_pump", "index_signal", "index_idler",
                "pm_factor"),
    "windows": ("T", "W"),
    "grids": ("mode", "w_points", "w_center", "w_step",
              "q_points", "q_center", "q_step",
              "quad_time_points", "quad_z_points", "quad_rho_points",
              "pump_points"),
    "analysis": ("epr_threshold", "collinear_tol", "pm_sweep_points"),
    "output": ("directory", "formats"),
}
_REQUIRED_SECTIONS = ("pump", "crystal", "windows", "grids")


@dataclass(frozen=True)
class IndexSpec:
    kind: str
    n: float | None = None
    lambda_min: float | None = None
    lambda_max: float | None = None
    terms: tuple[tuple[float, float], ...] | None = None


@dataclass(frozen=True)
class PumpSection:
    variant: str
    omega0: float
    sigma_omega: float | None = None
    waist: float | None = None


@dataclass(frozen=True)
class CrystalSection:
    L: float
    pdc_type: str
    index_pump: IndexSpec
    index_signal: IndexSpec
    index_idler: IndexSpec
    pm_factor: bool = True


@dataclass(frozen=True)
class WindowsSection:
    T: float
    W: float


@dataclass(frozen=True)
class GridsSection:
    mode: str
    w_points: int | None = None
    w_center: float | None = None
    w_step: float | None = None
    q_points: int | None = None
    q_center: float | None = None
    q_step: float | None = None
    quad_time_points: int = 256
    quad_z_points: int = 16
    quad_rho_points: int = 16
    pump_points: int = 64


@dataclass(frozen=True)
class AnalysisSection:
    epr_threshold: float = 1.0
    collinear_tol: float = 1e-4
    pm_sweep_points: int = 501


@dataclass(frozen=True)
class OutputSection:
    directory: str = "out"
    formats: tuple[str, ...] = ("dump", "csv")


@dataclass(frozen=True)
class RunConfig:
    pump: PumpSection
    crystal: CrystalSection
    windows: WindowsSection
    grids: GridsSection
    analysis: AnalysisSection = field(default_factory=AnalysisSection)
    output: OutputSection = field(default_factory=OutputSection)


def _raw_parse(text: str):
    """Tokenize into {section: {key: (value, line_no)}} with strict checks."""
    raw: dict[str, dict[str, tuple[str, int]]] = {}
    section = None
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if stripped.startswith("[") and stripped.endswith("]"):
            name = stripped[1:-1].strip()
            if name not in _SECTION_KEYS:
                raise ParseError(f"unknown section [{name}]", line=line_no)
            if name in raw:
                raise ParseError(f"duplicate section [{name}]", line=line_no)
            raw[name] = {}
            section = name
            continue
        if "=" not in stripped:
            raise ParseError(f"expected 'key = value', got {stripped!r}", line=line_no)
        if section is None:
            raise ParseError("key outside of any section", line=line_no)
        key, value = (part.strip() for part in stripped.split("=", 1))
        if key not in _SECTION_KEYS[section]:
            raise ParseError(f"unknown key {key!r} in section [{section}]", line=line_no)
        if key in raw[section]:
            raise ParseError(f"duplicate key {key!r} in section [{section}]", line=line_no)
        if not value:
            raise ParseError(f"empty value for {section}.{key}", line=line_no)
        raw[section][key] = (value, line_no)
    return raw


class _Section:
    def __init__(self, name, entries):
        self.name = name
        self.entries = entries

    def get(self, key, default=None):
        if key not in self.entries:
            return default
        return self.entries[key][0]

    def require(self, key):
        if key not in self.entries:
            raise ValidationError(f"{self.name}.{key} is required")
        return self.entries[key][0]

    def line(self, key):
        return self.entries[key][1]

    def as_float(self, key, default=None, required=False):
        value = self.require(key) if required else self.get(key)
        if value is None:
            return default
        try:
            return float(value)
        except ValueError:
            raise ParseError(f"{self.name}.{key}: {value!r} is not a number",
                             line=self.line(key)) from None

    def as_int(self, key, default=None, required=False):
        value = self.require(key) if required else self.get(key)
        if value is None:
            return default
        try:
            return int(value)
        except ValueError:
            raise ParseError(f"{self.name}.{key}: {value!r} is not an integer",
                             line=self.line(key)) from None

    def as_bool(self, key, default):
        value = self.get(key)
        if value is None:
            return default
        lowered = value.lower()
        if lowered in ("on", "true", "1", "yes"):
            return True
        if lowered in ("off", "false", "0", "no"):
            return False
        raise ParseError(f"{self.name}.{key}: {value!r} is not on/off",
                         line=self.line(key))


def _positive(name, value):
    if value is None or not (value > 0):
        raise ValidationError(f"{name} must be > 0")
    return value


def _parse_index_spec(section, key) -> IndexSpec:
    tokens = section.require(key).split()
    name = f"{section.name}.{key}"
    kind = tokens[0].lower()
    if kind == "constant":
        if len(tokens) != 2:
            raise ValidationError(f"{name}: expected 'constant <n>'")
        n = float(tokens[1])
        if n < 1.0:
            raise ValidationError(f"{name}: constant index must be >= 1")
        return IndexSpec(kind="constant", n=n)
    if kind == "sellmeier":
        body = [float(tok) for tok in tokens[1:]]
        if len(body) < 4 or len(body) % 2 != 0:
            raise ValidationError(
                f"{name}: expected 'sellmeier <lmin_um> <lmax_um> B1 C1 [B2 C2 ...]'")
        lmin, lmax = body[0], body[1]
        if not (0 < lmin < lmax):
            raise ValidationError(f"{name}: validity range must satisfy 0 < min < max")
        terms = tuple((body[i], body[i + 1]) for i in range(2, len(body), 2))
        return IndexSpec(kind="sellmeier", lambda_min=lmin, lambda_max=lmax,
                         terms=terms)
    raise ValidationError(f"{name}: unknown index model {tokens[0]!r}")


def parse_config(text: str) -> RunConfig:
    """Parse and validate config text; raises ParseError (with a line
    number) for malformed input and ValidationError for invariant breaks."""
    raw = _raw_parse(text)
    for name in _REQUIRED_SECTIONS:
        if name not in raw:
            raise ValidationError(f"missing required section [{name}]")
    sections = {name: _Section(name, raw.get(name, {})) for name in _SECTION_KEYS}

    sec = sections["pump"]
    variant = sec.require("variant").lower()
    if variant not in ("planewave", "gaussian"):
        raise ValidationError("pump.variant must be 'planewave' or 'gaussian'")
    omega0 = _positive("pump.omega0", sec.as_float("omega0", required=True))
    sigma_omega = sec.as_float("sigma_omega")
    waist = sec.as_float("waist")
    if variant == "gaussian":
        sigma_omega = _positive("pump.sigma_omega", sigma_omega)
        waist = _positive("pump.waist", waist)
    else:
        for extra in ("sigma_omega", "waist"):
            if sec.get(extra) is not None:
                raise ValidationError(
                    f"pump.{extra} is only valid for the gaussian variant")
    pump = PumpSection(variant=variant, omega0=omega0,
                       sigma_omega=sigma_omega, waist=waist)

    sec = sections["crystal"]
    L = sec.as_float("L", required=True)
    if L is None or not (L > 0):
        raise ValidationError("crystal.L must be > 0")
    pdc_type = sec.get("pdc_type", "I")
    if pdc_type not in ("I", "II"):
        raise ValidationError("crystal.pdc_type must be 'I' or 'II'")
    crystal = CrystalSection(
        L=L, pdc_type=pdc_type,
        index_pump=_parse_index_spec(sec, "index_pump"),
        index_signal=_parse_index_spec(sec, "index_signal"),
        index_idler=_parse_index_spec(sec, "index_idler"),
        pm_factor=sec.as_bool("pm_factor", True))

    sec = sections["windows"]
    windows = WindowsSection(
        T=_positive("windows.T", sec.as_float("T", required=True)),
        W=_positive("windows.W", sec.as_float("W", required=True)))

    sec = sections["grids"]
    mode = sec.require("mode").lower()
    if mode not in ("spectral", "spatial", "full4d"):
        raise ValidationError("grids.mode must be spectral, spatial or full4d")
    grids = GridsSection(
        mode=mode,
        w_points=sec.as_int("w_points"), w_center=sec.as_float("w_center"),
        w_step=sec.as_float("w_step"),
        q_points=sec.as_int("q_points"), q_center=sec.as_float("q_center"),
        q_step=sec.as_float("q_step"),
        quad_time_points=sec.as_int("quad_time_points", 256),
        quad_z_points=sec.as_int("quad_z_points", 16),
        quad_rho_points=sec.as_int("quad_rho_points", 16),
        pump_points=sec.as_int("pump_points", 64))
    needs_w = mode in ("spectral", "full4d")
    needs_q = mode in ("spatial", "full4d")
    if needs_w:
        if grids.w_points is None or grids.w_points < 2:
            raise ValidationError("grids.w_points must be an integer >= 2")
        _positive("grids.w_center", grids.w_center)
        _positive("grids.w_step", grids.w_step)
    if needs_q:
        if grids.q_points is None or grids.q_points < 2:
            raise ValidationError("grids.q_points must be an integer >= 2")
        if grids.q_center is None:
            raise ValidationError("grids.q_center is required")
        _positive("grids.q_step", grids.q_step)
    for key in ("quad_time_points", "quad_z_points", "quad_rho_points"):
        if getattr(grids, key) < 1:
            raise ValidationError(f"grids.{key} must be >= 1")
    if grids.pump_points < 2:
        raise ValidationError("grids.pump_points must be >= 2")

    sec = sections["analysis"]
    analysis = AnalysisSection(
        epr_threshold=_positive("analysis.epr_threshold",
                                sec.as_float("epr_threshold", 1.0)),
        collinear_tol=_positive("analysis.collinear_tol",
                                sec.as_float("collinear_tol", 1e-4)),
        pm_sweep_points=sec.as_int("pm_sweep_points", 501))
    if analysis.pm_sweep_points < 2:
        raise ValidationError("analysis.pm_sweep_points must be >= 2")

    sec = sections["output"]
    formats = tuple(sec.get("formats", "dump csv").split())
    for fmt in formats:
        if fmt not in ("dump", "csv"):
            raise ValidationError(f"output.formats: unknown format {fmt!r}")
    if not formats:
        raise ValidationError("output.formats must list at least one format")
    output = OutputSection(directory=sec.get("directory", "out"), formats=formats)

    return RunConfig(pump=pump, crystal=crystal, windows=windows, grids=grids,
                     analysis=analysis, output=output)


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "on" if x else "off"
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _index_value(spec: IndexSpec) -> str:
    if spec.kind == "constant":
        return f"constant {_fmt(spec.n)}"
    body = [spec.lambda_min, spec.lambda_max]
    for b, c in spec.terms:
        body.extend((b, c))
    return "sellmeier " + " ".join(_fmt(v) for v in body)


def serialize_config(cfg: RunConfig) -> str:
    """Canonical text form; parse(serialize(cfg)) == cfg."""
    lines = ["[pump]", f"variant = {cfg.pump.variant}",
             f"omega0 = {_fmt(cfg.pump.omega0)}"]
    if cfg.pump.variant == "gaussian":
        lines += [f"sigma_omega = {_fmt(cfg.pump.sigma_omega)}",
                  f"waist = {_fmt(cfg.pump.waist)}"]
    lines += ["", "[crystal]", f"L = {_fmt(cfg.crystal.L)}",
              f"pdc_type = {cfg.crystal.pdc_type}",
              f"index_pump = {_index_value(cfg.crystal.index_pump)}",
              f"index_signal = {_index_value(cfg.crystal.index_signal)}",
              f"index_idler = {_index_value(cfg.crystal.index_idler)}",
              f"pm_factor = {_fmt(cfg.crystal.pm_factor)}"]
    lines += ["", "[windows]", f"T = {_fmt(cfg.windows.T)}",
              f"W = {_fmt(cfg.windows.W)}"]
    lines += ["", "[grids]", f"mode = {cfg.grids.mode}"]
    if cfg.grids.mode in ("spectral", "full4d"):
        lines += [f"w_points = {cfg.grids.w_points}",
                  f"w_center = {_fmt(cfg.grids.w_center)}",
                  f"w_step = {_fmt(cfg.grids.w_step)}"]
    if cfg.grids.mode in ("spatial", "full4d"):
        lines += [f"q_points = {cfg.grids.q_points}",
                  f"q_center = {_fmt(cfg.grids.q_center)}",
                  f"q_step = {_fmt(cfg.grids.q_step)}"]
    lines += [f"quad_time_points = {cfg.grids.quad_time_points}",
              f"quad_z_points = {cfg.grids.quad_z_points}",
              f"quad_rho_points = {cfg.grids.quad_rho_points}",
              f"pump_points = {cfg.grids.pump_points}"]
    lines += ["", "[analysis]",
              f"epr_threshold = {_fmt(cfg.analysis.epr_threshold)}",
              f"collinear_tol = {_fmt(cfg.analysis.collinear_tol)}",
              f"pm_sweep_points = {cfg.analysis.pm_sweep_points}"]
    lines += ["", "[output]", f"directory = {cfg.output.directory}",
              f"formats = {' '.join(cfg.output.formats)}"]
    return "\n".join(lines) + "\n"


def build_index_model(spec: IndexSpec):
    if spec.kind == "constant":
        return ConstantIndex(n=spec.n)
    return SellmeierIndex(terms=spec.terms, lambda_min=spec.lambda_min,
                          lambda_max=spec.lambda_max)


def build_pump(cfg: RunConfig):
    index = build_index_model(cfg.crystal.index_pump)
    if cfg.pump.variant == "planewave":
        return PlaneWavePump(omega0=cfg.pump.omega0, index_model=index)
    return GaussianPump(omega0=cfg.pump.omega0, sigma_omega=cfg.pump.sigma_omega,
                        waist=cfg.pump.waist, index_model=index)


def build_crystal(cfg: RunConfig) -> CrystalConfig:
    return CrystalConfig(
        L=cfg.crystal.L,
        index_pump=build_index_model(cfg.crystal.index_pump),
        index_signal=build_index_model(cfg.crystal.index_signal),
        index_idler=build_index_model(cfg.crystal.index_idler),
        pdc_type=cfg.crystal.pdc_type)


def build_windows(cfg: RunConfig) -> ScatterWindows:
    return ScatterWindows(T=cfg.windows.T, W=cfg.windows.W)


def build_axes(cfg: RunConfig) -> tuple[Axis, ...]:
    g = cfg.grids
    w_axes = q_axes = ()
    if g.mode in ("spectral", "full4d"):
        w_axes = (Axis("w1", g.w_points, g.w_center, g.w_step),
                  Axis("w2", g.w_points, g.w_center, g.w_step))
    if g.mode in ("spatial", "full4d"):
        q_axes = (Axis("q1", g.q_points, g.q_center, g.q_step),
                  Axis("q2", g.q_points, g.q_center, g.q_step))
    if g.mode == "spectral":
        return w_axes
    if g.mode == "spatial":
        return q_axes
    return (q_axes[0], w_axes[0], q_axes[1], w_axes[1])


def build_quadrature(cfg: RunConfig) -> DirectQuadrature:
    g = cfg.grids
    return DirectQuadrature(
        n_time=g.quad_time_points, n_z=g.quad_z_points, n_rho=g.quad_rho_points,
        pump=PumpQuadrature(n_q=g.pump_points, n_omega=g.pump_points))
