from __future__ import annotations

import functools

import pytest

from itbasis.tensorbasis import TensorBasis, assemble


@functools.lru_cache(maxsize=None)
def _basis(algebra: str) -> TensorBasis:
    return assemble(algebra)


@pytest.fixture(scope="session")
def basis():
    return _basis


@pytest.fixture(scope="session", params=["G2", "F4", "E6"])
def any_basis(request) -> TensorBasis:
    return _basis(request.param)
