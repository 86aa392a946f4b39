import os
import sys
import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from mesh import load_mesh
from subdivision import StencilSet
from sem import SemContext


@pytest.fixture
def rng():
    return np.random.RandomState(0)


@pytest.fixture(scope='session')
def tetrahedron():
    return load_mesh('tetrahedron')


@pytest.fixture(scope='session')
def octahedron():
    return load_mesh('octahedron')


@pytest.fixture(scope='session')
def icosphere():
    return load_mesh('icosphere:1')


@pytest.fixture(scope='session')
def torus():
    return load_mesh('torus')


@pytest.fixture(scope='session')
def flap():
    return load_mesh('flap')


@pytest.fixture(scope='session')
def disk():
    return load_mesh('disk')


@pytest.fixture(scope='session')
def stencils():
    return StencilSet()


@pytest.fixture(scope='session')
def icosphere_ctx(icosphere, stencils):
    return SemContext.from_mesh(icosphere, 2, stencils)


@pytest.fixture(scope='session')
def torus_ctx(torus, stencils):
    return SemContext.from_mesh(torus, 1, stencils)
