import json

import numpy as np
import pytest

from hyperdisk import io
from hyperdisk.abel import RadialProfile
from hyperdisk.config import RunConfig, load_config, parse_config_text
from hyperdisk.fourier import SpectralData
from hyperdisk.radon_euclid import GridFunction, ImageGrid, Sinogram
from hyperdisk.radon_hyp import HypSinogram


def test_profile_roundtrip(tmp_path):
    prof = RadialProfile(np.linspace(0, 2, 11), np.exp(-np.linspace(0, 2, 11)) / 3)
    path = io.write_profile(tmp_path / "p.csv", prof)
    assert path.read_text().splitlines()[0] == "# abel-profile v1"
    back = io.read_profile(path)
    assert np.array_equal(back.grid, prof.grid) and np.array_equal(back.values, prof.values)


def test_spectral_roundtrip(tmp_path, rng):
    lam, theta = np.linspace(-1, 1, 5), np.linspace(0, 6, 4)
    vals = rng.normal(size=(5, 4)) + 1j * rng.normal(size=(5, 4))
    path = io.write_spectral(tmp_path / "s.csv", SpectralData(lam, theta, vals))
    lines = path.read_text().splitlines()
    assert lines[:2] == ["# helgason-spectral v1", "lambda,theta,re,im"]
    back = io.read_spectral(path)
    assert np.array_equal(back.values, vals) and np.array_equal(back.lam, lam)


@pytest.mark.parametrize("kind", ["euclid", "hyp"])
def test_sinogram_roundtrip(tmp_path, rng, kind):
    a, b = np.linspace(0, np.pi, 6, endpoint=False), np.linspace(0, 1, 7)
    v = rng.random((6, 7))
    sino = Sinogram(a, b, v) if kind == "euclid" else HypSinogram(2 * a, b, v)
    path = io.write_sinogram(tmp_path / "x.csv", sino)
    header = path.read_text().splitlines()[:2]
    assert header[0] == f"# sinogram v1 {kind}"
    assert header[1] == ("theta,p,value" if kind == "euclid" else "psi,s,value")
    back = io.read_sinogram(path)
    assert type(back) is type(sino) and np.array_equal(back.values, v)


def test_wrong_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("# something else\na,b\n1,2\n")
    with pytest.raises(ValueError, match="header"):
        io.read_profile(path)
    with pytest.raises(ValueError, match="header"):
        io.read_sinogram(path)


def test_grid_function_roundtrip(tmp_path, rng):
    grid = ImageGrid(5, 0.4)
    gf = GridFunction(grid, rng.random((5, 5)), 0.3)
    path = io.write_grid_function(tmp_path / "g.csv", gf)
    side = json.loads(path.with_suffix(".json").read_text())
    assert side["n"] == 5 and side["extent"] == [-0.4, 0.4, -0.4, 0.4] and side["cell_centred"]
    back = io.read_grid_function(path)
    assert np.array_equal(back.values, gf.values) and back.grid.n == 5


def test_grid_function_shape_mismatch(tmp_path):
    path = io.write_grid_function(tmp_path / "g.csv", GridFunction(ImageGrid(4, 1.0), np.zeros((4, 4)), None))
    np.savetxt(path, np.zeros((3, 3)), delimiter=",")
    with pytest.raises(ValueError):
        io.read_grid_function(path)


def test_report_is_plain_json(tmp_path):
    rep = io.make_report("x", {"a": np.float64(1.5)}, {"z": 1 + 2j, "arr": np.arange(3)}, {"ok": np.bool_(True)}, 0.1)
    assert rep["schema"] == "report-v1" and rep["passed"] is True
    assert rep["metrics"]["z"] == [1.0, 2.0]
    back = json.loads(io.write_report(tmp_path / "r.json", rep).read_text())
    assert back == rep
    assert io.make_report("x", {}, {}, {"a": True, "b": False}, 0)["passed"] is False


def test_config_defaults_valid():
    assert load_config() == RunConfig()


def test_config_file_and_override(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# study\nlam_max = 40   # doubled\nn-boundary = 128\nrichardson = true\ntest_fn = zero\n")
    cfg = load_config(path, {"dlam": 0.025, "n_r": None})
    assert (cfg.lam_max, cfg.n_boundary, cfg.richardson, cfg.test_fn, cfg.dlam) == (40.0, 128, True, "zero", 0.025)
    assert cfg.n_r == RunConfig().n_r


def test_parse_config_text():
    assert parse_config_text("a = 1\nb=2.5\n\nc = hello # x") == {"a": 1, "b": 2.5, "c": "hello"}
    with pytest.raises(ValueError, match="line 2"):
        parse_config_text("a = 1\nbroken")


@pytest.mark.parametrize(
    "overrides, key",
    [
        ({"bogus": 1}, "bogus"),
        ({"n_r": 0}, "n_r"),
        ({"dp": -0.1}, "dp"),
        ({"r0": 1.2}, "r0"),
        ({"bc_half_width": 1.0}, "bc_half_width"),
        ({"n_psi": 2.5}, "n_psi"),
        ({"richardson": "yes"}, "richardson"),
        ({"lam_max": "many"}, "lam_max"),
        ({"padding": 1.0}, "padding"),
        ({"center_re": 0.8, "center_im": 0.8}, "center_re"),
    ],
)
def test_config_errors_name_key(overrides, key):
    with pytest.raises(ValueError, match=key):
        load_config(None, overrides)
