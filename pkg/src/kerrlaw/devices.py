"""Device files: flat ``key = value`` text with units, uncertainties and provenance.

One parameter per line::

    platform = quarton
    EJ      = 14.8 GHz  +- 2 %        @measured
    p_A     = 0.88                    @measured
    measured_chi = 366.0 MHz +- 0.5 MHz @measured
    eta_kernel   = 0.0244             @paper-kernel

``#`` starts a comment. Frequencies must carry an explicit unit (Hz, kHz,
MHz, GHz, THz) and are stored in Hz. An uncertainty follows ``+-`` either
as a percentage or in the value's own dimension; it is kept as a relative
uncertainty. Provenance is one of measured, paper-kernel, assumed and
defaults to assumed.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, Optional, Union

from kerrlaw.errors import DeviceFileError

PROVENANCES = ("measured", "paper-kernel", "assumed")

_SI_PREFIX = {"": 1.0, "k": 1e3, "M": 1e6, "G": 1e9, "T": 1e12, "P": 1e15}

UNITS = {
    "freq": {f"{p}Hz": s for p, s in _SI_PREFIX.items()},
    "angular": {f"{p}rad/s": s for p, s in _SI_PREFIX.items()},
    "length": {"m": 1.0, "mm": 1e-3, "um": 1e-6, "nm": 1e-9},
    "volume": {"m^3": 1.0, "um^3": 1e-18, "nm^3": 1e-27},
    "inv_volume": {"m^-3": 1.0, "um^-3": 1e18},
    "chi3": {"m^2/V^2": 1.0},
    "n2": {"m^2/W": 1.0},
    "dimensionless": {"": 1.0},
    "integer": {"": 1.0},
    "percent": {"%": 1.0},
    "flux": {"": 1.0, "Phi0": 1.0},
    "text": {},
}

# canonical SI unit label per kind, used in reports
SI_LABEL = {
    "freq": "Hz",
    "angular": "rad/s",
    "length": "m",
    "volume": "m^3",
    "inv_volume": "m^-3",
    "chi3": "m^2/V^2",
    "n2": "m^2/W",
    "dimensionless": "",
    "integer": "",
    "percent": "%",
    "flux": "Phi0",
    "text": "",
}


@dataclass(frozen=True)
class Key:
    kind: str
    required: bool = False
    lo: Optional[float] = None
    hi: Optional[float] = None
    lo_open: bool = False  # True: value must be > lo
    keyword: Optional[str] = None  # text value also accepted for numeric keys

    @property
    def sweepable(self) -> bool:
        return self.kind not in ("integer", "text", "percent")


_COMMON = {
    "name": Key("text"),
    "measured_chi": Key("freq"),
    "kappa": Key("freq", lo=0, lo_open=True),
    "mode_spacing": Key("freq", lo=0, lo_open=True),
    "reference_delta": Key("percent", lo=0),
}

_POS_FREQ = dict(lo=0, lo_open=True)

SCHEMAS: Dict[str, Dict[str, Key]] = {
    "quarton": {
        "EJ": Key("freq", True, **_POS_FREQ),
        "EC": Key("freq", True, **_POS_FREQ),
        "p_A": Key("dimensionless", True, 0, 1),
        "p_B": Key("dimensionless", True, 0, 1),
        "omega_A": Key("freq", True, **_POS_FREQ),
        "omega_B": Key("freq", True, **_POS_FREQ),
        "eta_kernel": Key("dimensionless", lo=0),
    },
    "squid": {
        "EJ": Key("freq", True, **_POS_FREQ),
        "EC": Key("freq", True, **_POS_FREQ),
        "omega": Key("freq", **_POS_FREQ),
        "eta_kernel": Key("dimensionless", lo=0),
    },
    "fluxonium": {
        "EJ": Key("freq", True, **_POS_FREQ),
        "p": Key("dimensionless", True, 0, 1),
        "phi_zpf": Key("dimensionless", True, lo=0),
        "omega": Key("freq", **_POS_FREQ),
        "eta_kernel": Key("dimensionless", lo=0),
    },
    "snail": {
        "EJ": Key("freq", True, **_POS_FREQ),
        "EC": Key("freq", True, **_POS_FREQ),
        "N": Key("integer", True, lo=2),
        "alpha": Key("dimensionless", True, lo=0, lo_open=True),
        "flux": Key("flux", True, keyword="kerr-free"),
        "omega": Key("freq", **_POS_FREQ),
    },
    "photonic": {
        "wavelength": Key("length", True, **_POS_FREQ),
        "n0": Key("dimensionless", True, lo=0, lo_open=True),
        "chi3": Key("chi3", lo=0, lo_open=True),
        "n2": Key("n2", lo=0, lo_open=True),
        "V_eff": Key("volume", **_POS_FREQ),
        "Gamma0": Key("inv_volume", **_POS_FREQ),
        "overlap": Key("inv_volume", lo=0),
        "field_a": Key("text"),
        "field_b": Key("text"),
        "omega": Key("freq", **_POS_FREQ),
        "eta_kernel": Key("dimensionless", lo=0),
        "e4_kernel": Key("freq", lo=0),
    },
    "enz": {
        "eps_inf": Key("dimensionless", lo=0, lo_open=True),
        "omega_p": Key("angular", **_POS_FREQ),
        "gamma": Key("angular", lo=0),
        "chi3_eff": Key("chi3", lo=0),
        "V_eff": Key("volume", **_POS_FREQ),
        "omega_probe": Key("angular", **_POS_FREQ),
        "eta_kernel": Key("dimensionless", True, lo=0),
        "e4_kernel": Key("freq", lo=0),
    },
}
for _schema in SCHEMAS.values():
    _schema.update(_COMMON)

# groups where at least one key must be present
_ONE_OF = {
    "photonic": [("chi3", "n2"), ("V_eff", "field_a"), ("overlap", "field_a")],
    "enz": [],
}
# keys that only make sense together
_ALL_OR_NONE = {
    "enz": [("omega_p", "chi3_eff", "V_eff", "omega_probe")],
    "photonic": [("field_a", "field_b")],
}


@dataclass(frozen=True)
class Param:
    value: Union[float, int, str]
    unit: str = ""
    rel_unc: float = 0.0
    provenance: str = "assumed"
    line: Optional[int] = None

    @property
    def is_text(self) -> bool:
        return isinstance(self.value, str)


@dataclass(frozen=True)
class DeviceFile:
    platform: str
    params: Dict[str, Param] = field(default_factory=dict)
    path: Optional[Path] = None

    def __contains__(self, key):
        return key in self.params

    def get(self, key, default=None):
        p = self.params.get(key)
        return default if p is None else p.value

    def rel(self, key) -> float:
        p = self.params.get(key)
        return 0.0 if p is None else p.rel_unc

    def param(self, key) -> Param:
        try:
            return self.params[key]
        except KeyError:
            raise DeviceFileError(f"missing required key {key!r}", self.path) from None

    @property
    def name(self) -> str:
        if "name" in self.params:
            return str(self.params["name"].value)
        return self.path.stem if self.path is not None else self.platform

    @property
    def measured_chi(self):
        """(value Hz, absolute uncertainty Hz) or None."""
        p = self.params.get("measured_chi")
        if p is None:
            return None
        return float(p.value), abs(float(p.value)) * p.rel_unc

    def with_value(self, key: str, value) -> "DeviceFile":
        """Copy with one parameter replaced; the result is re-validated."""
        schema = SCHEMAS[self.platform]
        if key not in schema:
            raise DeviceFileError(f"unknown key {key!r} for platform {self.platform!r}", self.path)
        old = self.params.get(key)
        new = replace(old, value=value) if old is not None else Param(value, SI_LABEL[schema[key].kind])
        params = dict(self.params)
        params[key] = new
        dev = DeviceFile(self.platform, params, self.path)
        validate(dev)
        return dev


def _split_value(text, path, lineno):
    toks = text.replace("±", " +- ").replace("%", " % ").split()
    prov = "assumed"
    if toks and toks[-1].startswith("@"):
        prov = toks.pop()[1:]
        if prov not in PROVENANCES:
            raise DeviceFileError(
                f"unknown provenance {prov!r} (expected one of {', '.join(PROVENANCES)})",
                path, lineno,
            )
    if "+-" in toks:
        i = toks.index("+-")
        main, unc = toks[:i], toks[i + 1:]
        if not unc:
            raise DeviceFileError("'+-' must be followed by an uncertainty", path, lineno)
    else:
        main, unc = toks, None
    if not main:
        raise DeviceFileError("empty value", path, lineno)
    if len(main) > 2:
        raise DeviceFileError(f"cannot parse value {' '.join(main)!r}", path, lineno)
    return main, unc, prov


def _number(tok, what, path, lineno):
    try:
        v = float(tok)
    except ValueError:
        raise DeviceFileError(f"{what}: expected a number, got {tok!r}", path, lineno) from None
    if not math.isfinite(v):
        raise DeviceFileError(f"{what}: value must be finite, got {tok!r}", path, lineno)
    return v


def _parse_param(key, spec: Key, text, path, lineno) -> Param:
    main, unc, prov = _split_value(text, path, lineno)
    if spec.kind == "text":
        if unc is not None or len(main) != 1:
            raise DeviceFileError(f"{key}: expected a single word", path, lineno)
        return Param(main[0], "", 0.0, prov, lineno)
    if spec.keyword is not None and main == [spec.keyword]:
        return Param(spec.keyword, "", 0.0, prov, lineno)

    unit = main[1] if len(main) == 2 else ""
    table = UNITS[spec.kind]
    if unit not in table:
        allowed = ", ".join(repr(u) for u in table if u) or "none"
        if spec.kind == "freq" and not unit:
            raise DeviceFileError(f"{key}: frequencies need an explicit unit ({allowed})", path, lineno)
        raise DeviceFileError(f"{key}: unit {unit or '(none)'!r} not allowed; use {allowed}", path, lineno)
    raw = _number(main[0], key, path, lineno)
    if spec.kind == "integer":
        if raw != int(raw):
            raise DeviceFileError(f"{key}: expected an integer, got {main[0]!r}", path, lineno)
        value = int(raw)
    else:
        value = raw * table[unit]

    rel = 0.0
    if unc is not None:
        if len(unc) > 2:
            raise DeviceFileError(f"{key}: cannot parse uncertainty {' '.join(unc)!r}", path, lineno)
        u = _number(unc[0], f"{key} uncertainty", path, lineno)
        if u < 0:
            raise DeviceFileError(f"{key}: uncertainty must be >= 0", path, lineno)
        uunit = unc[1] if len(unc) == 2 else unit
        if uunit == "%":
            rel = u / 100.0
        elif uunit in table:
            rel = 0.0 if value == 0 else abs(u * table[uunit] / value)
        else:
            raise DeviceFileError(f"{key}: uncertainty unit {uunit!r} not allowed", path, lineno)
    return Param(value, SI_LABEL[spec.kind], rel, prov, lineno)


def parse_device_text(text: str, path=None) -> DeviceFile:
    platform = None
    platform_line = None
    raw: Dict[str, tuple] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise DeviceFileError(f"expected 'key = value', got {body!r}", path, lineno)
        key, _, value = (s.strip() for s in body.partition("="))
        if not key:
            raise DeviceFileError("missing key before '='", path, lineno)
        if key == "platform":
            if platform is not None:
                raise DeviceFileError("duplicate key 'platform'", path, lineno)
            platform, platform_line = value, lineno
            continue
        if key in raw:
            raise DeviceFileError(f"duplicate key {key!r} (first on line {raw[key][1]})", path, lineno)
        raw[key] = (value, lineno)

    if platform is None:
        raise DeviceFileError("missing required key 'platform'", path)
    if platform not in SCHEMAS:
        raise DeviceFileError(
            f"unknown platform {platform!r} (expected one of {', '.join(SCHEMAS)})", path, platform_line
        )
    schema = SCHEMAS[platform]
    params = {}
    for key, (value, lineno) in raw.items():
        if key not in schema:
            raise DeviceFileError(f"unknown key {key!r} for platform {platform!r}", path, lineno)
        params[key] = _parse_param(key, schema[key], value, path, lineno)
    dev = DeviceFile(platform, params, Path(path) if path is not None else None)
    validate(dev)
    return dev


def validate(dev: DeviceFile):
    """Check required keys and ranges; raises DeviceFileError naming the key."""
    schema = SCHEMAS[dev.platform]
    for key, spec in schema.items():
        if spec.required and key not in dev.params:
            raise DeviceFileError(f"missing required key {key!r} for platform {dev.platform!r}", dev.path)
    for group in _ONE_OF.get(dev.platform, []):
        if not any(k in dev.params for k in group):
            raise DeviceFileError(f"platform {dev.platform!r} needs one of {', '.join(group)}", dev.path)
    for group in _ALL_OR_NONE.get(dev.platform, []):
        present = [k for k in group if k in dev.params]
        if present and len(present) != len(group):
            missing = [k for k in group if k not in dev.params]
            raise DeviceFileError(
                f"{', '.join(present)} given without {', '.join(missing)}", dev.path
            )
    for key, p in dev.params.items():
        spec = schema[key]
        if p.is_text:
            continue
        v = p.value
        bad = False
        if spec.lo is not None and (v < spec.lo or (spec.lo_open and v == spec.lo)):
            bad = True
        if spec.hi is not None and v > spec.hi:
            bad = True
        if bad:
            lo = "-inf" if spec.lo is None else repr(spec.lo)
            hi = "inf" if spec.hi is None else repr(spec.hi)
            lb = "(" if spec.lo_open or spec.lo is None else "["
            raise DeviceFileError(f"{key} = {v!r} out of range {lb}{lo}, {hi}]", dev.path, p.line)


def parse_device_file(path) -> DeviceFile:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise DeviceFileError(f"cannot read device file: {exc.strerror}", path) from None
    return parse_device_text(text, path=path)


_GLUED = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(\S*)\s*$")


def parse_quantity(text: str, kind: str) -> float:
    """Parse a CLI value such as ``5 GHz``, ``5GHz`` or ``0.25`` for a key of the given kind."""
    m = _GLUED.match(text)
    if m is not None:
        text = f"{m.group(1)} {m.group(2)}".strip()
    try:
        return float(_parse_param("value", Key(kind), text, None, None).value)
    except DeviceFileError as exc:
        raise DeviceFileError(f"cannot parse {text!r}: {exc}") from None
