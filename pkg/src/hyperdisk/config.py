"""Run configuration: defaults, a flat key = value file format, and validation.

Config files hold one ``key = value`` per line; ``#`` starts a comment.
Keys use underscores (``lam_max = 20``); values are parsed as int, float,
bool (true/false) or left as strings.  Command-line flags override file values.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

# checked as > 0 when present
POSITIVE = ("lam_max", "dlam", "n_boundary", "n_r", "n_theta", "n_omega", "dp", "p_max", "n_psi", "ds",
            "n_dir", "grid_n", "half_width", "padding", "h", "width", "R", "radius", "threads", "region",
            "bc_grid_n", "bc_half_width")
# Euclidean radii that must stay inside the disk
DISK_RADII = ("r0", "bc_half_width")


@dataclass(frozen=True)
class RunConfig:
    # fourier
    test_fn: str = "radial-bump"
    r0: float = 0.5
    width: float = 0.3
    center_re: float = 0.0
    center_im: float = 0.0
    lam_max: float = 20.0
    dlam: float = 0.05
    n_boundary: int = 64
    n_r: int = 48
    n_theta: int = 96
    lam: float = 0.7
    k: int = 1
    # radon
    phantom: str = ""  # empty: gaussian (euclid) or radial-bump (hyp)
    radius: float = 1.0  # euclid disk / bump radius
    R: float = 1.5  # hyperbolic phantom radius
    n_omega: int = 180
    dp: float = 0.01
    p_max: float = 12.0
    grid_n: int = 256
    half_width: float = 4.0
    padding: float = 2.0
    n_psi: int = 180
    ds: float = 0.01
    n_dir: int = 180
    bc_grid_n: int = 24
    bc_half_width: float = 0.48
    # eigen
    eigen_kind: str = "exponential"
    eigenvalue: str = ""
    region: float = 0.6
    h: float = 1e-3
    tol: float = 0.0  # 0 selects the command's default tolerance
    richardson: bool = False
    # io / execution
    out: str = "out"
    threads: int = 1
    seed: int = 0

    def validate(self):
        for key in POSITIVE:
            if getattr(self, key) <= 0:
                raise ValueError(f"config key {key!r} must be positive, got {getattr(self, key)!r}")
        for key in DISK_RADII:
            if not getattr(self, key) < 1:
                raise ValueError(f"config key {key!r} must be < 1 (disk inputs), got {getattr(self, key)!r}")
        if abs(complex(self.center_re, self.center_im)) >= 1:
            raise ValueError("config keys 'center_re'/'center_im' must give a point inside the disk")
        if self.tol < 0:
            raise ValueError("config key 'tol' must be non-negative")
        if self.padding <= 1:
            raise ValueError("config key 'padding' must exceed 1")
        return self

    def as_dict(self):
        return asdict(self)


def _coerce(text: str):
    low = text.lower()
    if low in ("true", "false"):
        return low == "true"
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def parse_config_text(text: str) -> dict:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        out[key.replace("-", "_")] = _coerce(value)
    return out


def load_config(path=None, overrides=None) -> RunConfig:
    """Defaults, then the file at ``path``, then ``overrides`` (None values skipped)."""
    values = {}
    if path is not None:
        values.update(parse_config_text(Path(path).read_text()))
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    known = {f.name: f for f in fields(RunConfig)}
    unknown = sorted(set(values) - set(known))
    if unknown:
        raise ValueError(f"unknown config key {unknown[0]!r}")
    typed = {}
    for key, value in values.items():
        want = type(getattr(RunConfig(), key))
        if isinstance(value, str) and want is not str:
            value = _coerce(value)
        try:
            if want is bool and not isinstance(value, bool):
                raise ValueError
            if want is int and not float(value).is_integer():
                raise ValueError
            typed[key] = want(value) if not isinstance(value, want) else value
        except (TypeError, ValueError):
            raise ValueError(f"config key {key!r}: cannot read {value!r} as {want.__name__}") from None
    return replace(RunConfig(), **typed).validate()
