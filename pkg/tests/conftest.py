import numpy as np
import pytest

from degsyn import StateSpace, SynthesisSpec, synthesize
from degsyn.f16 import F16_WD, f16_state_space


def random_stable_plant(rng, nx=None, nu=None, nd=None, nz=None, margin=(0.3, 1.5)):
    """Random Hurwitz plant with Dd = 0 and O(1) data."""
    nx = nx if nx is not None else int(rng.integers(2, 7))
    nu = nu if nu is not None else int(rng.integers(1, 4))
    nd = nd if nd is not None else int(rng.integers(1, 3))
    nz = nz if nz is not None else int(rng.integers(1, 3))
    R = rng.standard_normal((nx, nx))
    shift = np.linalg.eigvals(R).real.max() + rng.uniform(*margin)
    return StateSpace(
        A=R - shift * np.eye(nx),
        Bu=rng.standard_normal((nx, nu)),
        Bd=rng.standard_normal((nx, nd)),
        Cz=rng.standard_normal((nz, nx)),
        Dd=np.zeros((nz, nd)),
    )


def random_stable_abc(rng, nx=None, nb=None, nc=None):
    """Random Hurwitz (A, B, C) triple for norm-oracle tests."""
    nx = nx if nx is not None else int(rng.integers(2, 9))
    nb = nb if nb is not None else int(rng.integers(1, 4))
    nc = nc if nc is not None else int(rng.integers(1, 4))
    R = rng.standard_normal((nx, nx))
    A = R - (np.linalg.eigvals(R).real.max() + rng.uniform(0.2, 1.5)) * np.eye(nx)
    return A, rng.standard_normal((nx, nb)), rng.standard_normal((nc, nx))


@pytest.fixture(scope="session")
def f16():
    return f16_state_space()


@pytest.fixture(scope="session")
def f16_wd():
    return F16_WD


@pytest.fixture(scope="session")
def f16_hinf(f16):
    spec = SynthesisSpec(norm_kind="hinf", gamma=0.5, Wd=F16_WD)
    result = synthesize(f16, spec)
    assert result.status == "optimal"
    return spec, result


@pytest.fixture(scope="session")
def f16_h2(f16):
    spec = SynthesisSpec(norm_kind="h2", gamma=0.5, Wd=F16_WD)
    result = synthesize(f16, spec)
    assert result.status == "optimal"
    return spec, result
