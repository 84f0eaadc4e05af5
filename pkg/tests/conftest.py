"""Session fixtures: the desk-scale spaces every test module shares.

cfg1  -- the clique/exchange/reconstruction workhorse (both gates of the
         abstract pipeline get exercised; the bundle gate formula holds).
cfg3  -- the pencil-gate config (3 <= n-k and 3 <= k-m) used for the
         ternary concurrency and pencil recovery sweeps.
cex   -- the neighbourhood-of-a-point case over GF(3), where a central
         collineation of one star breaks bundle preservation.
roomy -- a config whose lines all sit in 4-dimensional stars, where the
         full reconstruction genuinely succeeds for both relations.
"""

from __future__ import annotations

import pytest

from spinegeo import build_spine, standard_params
from spinegeo.cliques import geometric_families
from spinegeo.relations import compute_pi, compute_rho

CFG1 = (2, 6, 2, 1, 3)
CFG3 = (2, 6, 3, 0, 1)
CEX = (3, 5, 2, 1, 2)
ROOMY = (2, 6, 2, 0, 2)


def _space(params):
    return build_spine(standard_params(*params))


@pytest.fixture(scope="session")
def cfg1_space():
    return _space(CFG1)


@pytest.fixture(scope="session")
def cfg1_pi(cfg1_space):
    return compute_pi(cfg1_space)


@pytest.fixture(scope="session")
def cfg1_rho(cfg1_space):
    return compute_rho(cfg1_space)


@pytest.fixture(scope="session")
def cfg1_fams(cfg1_space):
    return geometric_families(cfg1_space)


@pytest.fixture(scope="session")
def cfg3_space():
    return _space(CFG3)


@pytest.fixture(scope="session")
def cfg3_pi(cfg3_space):
    return compute_pi(cfg3_space)


@pytest.fixture(scope="session")
def cfg3_rho(cfg3_space):
    return compute_rho(cfg3_space)


@pytest.fixture(scope="session")
def cex_space():
    return _space(CEX)


@pytest.fixture(scope="session")
def cex_pi(cex_space):
    return compute_pi(cex_space)


@pytest.fixture(scope="session")
def cex_rho(cex_space):
    return compute_rho(cex_space)


@pytest.fixture(scope="session")
def roomy_space():
    return _space(ROOMY)
