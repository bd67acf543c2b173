import numpy as np
import pytest

from ondes_vdw.core.solveur import SolverSettings
from ondes_vdw.models.fonctionnelle import ModelParams, build_kernels
from ondes_vdw.models.grille import GaussianProfile, make_grid, sample_profile


def pytest_addoption(parser):
    parser.addoption("--lent", action="store_true", default=False,
                     help="lance aussi les tests de convergence sur grilles fines")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--lent"):
        return
    saut = pytest.mark.skip(reason="test long: utiliser --lent")
    for item in items:
        if "lent" in item.keywords:
            item.add_marker(saut)


@pytest.fixture
def grille_petite():
    return make_grid(3, 16, 8.0)


@pytest.fixture
def grille_reference():
    """Grille grossière adaptée à ω₀ pour c = 2 (largeur ≈ 2)."""
    return make_grid(3, 16, 10.0)


@pytest.fixture
def params_cas_iv():
    return ModelParams(dim=3, alpha=2.5, beta=2.8, mu_beta=-0.05, mass_target=1.0)


@pytest.fixture
def gaussienne(grille_petite):
    return sample_profile(grille_petite, GaussianProfile(1.0, mass_target=1.0))


@pytest.fixture
def noyaux_petits(params_cas_iv, grille_petite):
    return build_kernels(params_cas_iv, grille_petite)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def reglages_rapides():
    return SolverSettings(max_iter=3000, grad_tol=1e-5, pohozaev_tol=5e-2, log_every=1000)
