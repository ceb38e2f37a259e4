"""CSV and JSON artifacts: profiles, spectral data, sinograms, image grids, reports."""

from __future__ import annotations

import json
import platform
from pathlib import Path

import numpy as np

from .abel import RadialProfile
from .fourier import SpectralData
from .radon_euclid import GridFunction, ImageGrid, Sinogram
from .radon_hyp import HypSinogram

PROFILE_HEADER = "# abel-profile v1"
SPECTRAL_HEADER = "# helgason-spectral v1"  # fixed interface string
SINO_EUCLID_HEADER = "# sinogram v1 euclid"
SINO_HYP_HEADER = "# sinogram v1 hyp"
REPORT_SCHEMA = "report-v1"


def _write(path, header, columns, names):
    path = Path(path)
    data = np.column_stack(columns)
    with path.open("w") as fh:
        fh.write(header + "\n")
        fh.write(",".join(names) + "\n")
        np.savetxt(fh, data, delimiter=",", fmt="%.17g")
    return path


def _read(path, header, ncols):
    path = Path(path)
    with path.open() as fh:
        first = fh.readline().strip()
        if first != header:
            raise ValueError(f"{path}: expected header {header!r}, found {first!r}")
        fh.readline()  # column names
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if data.shape[1] != ncols:
        raise ValueError(f"{path}: expected {ncols} columns, found {data.shape[1]}")
    return data


def write_profile(path, prof: RadialProfile):
    return _write(path, PROFILE_HEADER, [prof.grid, prof.values], ["abscissa", "value"])


def read_profile(path) -> RadialProfile:
    data = _read(path, PROFILE_HEADER, 2)
    return RadialProfile(data[:, 0], data[:, 1])


def write_spectral(path, sd: SpectralData):
    lam, theta = np.meshgrid(sd.lam, sd.theta, indexing="ij")
    v = sd.values
    return _write(path, SPECTRAL_HEADER, [lam.ravel(), theta.ravel(), v.real.ravel(), v.imag.ravel()],
                  ["lambda", "theta", "re", "im"])


def read_spectral(path) -> SpectralData:
    data = _read(path, SPECTRAL_HEADER, 4)
    lam = np.unique(data[:, 0])
    theta = np.unique(data[:, 1])
    vals = (data[:, 2] + 1j * data[:, 3]).reshape(lam.size, theta.size)
    return SpectralData(lam, theta, vals)


def write_sinogram(path, sino):
    if isinstance(sino, HypSinogram):
        a, b = np.meshgrid(sino.psi, sino.s, indexing="ij")
        return _write(path, SINO_HYP_HEADER, [a.ravel(), b.ravel(), sino.values.ravel()], ["psi", "s", "value"])
    a, b = np.meshgrid(sino.theta, sino.p, indexing="ij")
    return _write(path, SINO_EUCLID_HEADER, [a.ravel(), b.ravel(), sino.values.ravel()], ["theta", "p", "value"])


def read_sinogram(path):
    """Read either sinogram flavour, dispatching on the header line."""
    with Path(path).open() as fh:
        header = fh.readline().strip()
    if header == SINO_HYP_HEADER:
        data = _read(path, header, 3)
        psi, s = np.unique(data[:, 0]), np.unique(data[:, 1])
        return HypSinogram(psi, s, data[:, 2].reshape(psi.size, s.size))
    data = _read(path, SINO_EUCLID_HEADER, 3)
    theta, p = np.unique(data[:, 0]), np.unique(data[:, 1])
    return Sinogram(theta, p, data[:, 2].reshape(theta.size, p.size))


def write_grid_function(path, gf: GridFunction):
    """Row-major CSV of values (row index = y) plus a JSON sidecar with the geometry."""
    path = Path(path)
    np.savetxt(path, gf.values, delimiter=",", fmt="%.17g")
    side = {
        "n": gf.grid.n,
        "extent": [-gf.grid.half_width, gf.grid.half_width, -gf.grid.half_width, gf.grid.half_width],
        "spacing": gf.grid.spacing,
        "cell_centred": True,
        "support": gf.support,
    }
    path.with_suffix(".json").write_text(json.dumps(side, indent=2))
    return path


def read_grid_function(path) -> GridFunction:
    path = Path(path)
    side = json.loads(path.with_suffix(".json").read_text())
    grid = ImageGrid(int(side["n"]), float(side["extent"][1]))
    values = np.loadtxt(path, delimiter=",", ndmin=2)
    if values.shape != (grid.n, grid.n):
        raise ValueError(f"{path}: values do not match the {grid.n}x{grid.n} grid in the sidecar")
    return GridFunction(grid, values, side.get("support"))


def write_residual_scan(path, z, residuals):
    z = np.asarray(z, dtype=complex)
    path = Path(path)
    with path.open("w") as fh:
        fh.write("z_re,z_im,residual\n")
        np.savetxt(fh, np.column_stack([z.real, z.imag, residuals]), delimiter=",", fmt="%.17g")
    return path


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, Path):
        return str(obj)
    return obj


def make_report(command, config, metrics, checks, runtime):
    """report-v1: {schema, command, config, metrics, checks, passed, runtime_s, env}."""
    checks = {k: bool(v) for k, v in checks.items()}
    return _plain({
        "schema": REPORT_SCHEMA,
        "command": command,
        "config": config,
        "metrics": metrics,
        "checks": checks,
        "passed": all(checks.values()),
        "runtime_s": runtime,
        "env": {"python": platform.python_version(), "numpy": np.__version__},
    })


def write_report(path, report):
    path = Path(path)
    path.write_text(json.dumps(report, indent=2, sort_keys=False))
    return path
