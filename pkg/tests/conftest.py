import os

import numpy as np
import pytest

from geodint import density, generators, kernels

FIXTURE_DIR = os.path.join(os.path.dirname(__file__), "fixtures")
GAN_WEIGHTS = os.path.join(FIXTURE_DIR, "gan_ring2d.weights.json")
GAN_FORWARD_FIXTURES = os.path.join(FIXTURE_DIR, "gan_ring2d.fixtures.json")


@pytest.fixture(params=sorted(kernels.available_backends()))
def backend(request):
    """Run the decorated test under every available kernel backend."""
    with kernels.forced_backend(request.param):
        yield request.param


@pytest.fixture(scope="session")
def warp():
    return generators.RadialWarpGenerator()


@pytest.fixture(scope="session")
def prior2():
    return density.StandardNormalPrior(2)


@pytest.fixture(scope="session")
def toy_gan():
    return generators.load_weight_file(GAN_WEIGHTS)


@pytest.fixture(scope="session")
def random_mlp():
    rng = np.random.default_rng(11)
    layers = [
        generators.MlpLayer(rng.normal(size=(16, 2)) * 0.6, rng.normal(size=16) * 0.1, "tanh"),
        generators.MlpLayer(rng.normal(size=(16, 16)) * 0.35, rng.normal(size=16) * 0.1, "tanh"),
        generators.MlpLayer(rng.normal(size=(3, 16)) * 0.6, rng.normal(size=3) * 0.1, "identity"),
    ]
    return generators.MlpGenerator(layers)


def fd_jacobian(f, z, h=1e-6):
    """Central-difference Jacobian, the reference for every analytic one."""
    z = np.asarray(z, dtype=np.float64)
    cols = [
        (f.forward(z + h * e) - f.forward(z - h * e)) / (2.0 * h)
        for e in np.eye(z.shape[0])
    ]
    return np.stack(cols, axis=1)
