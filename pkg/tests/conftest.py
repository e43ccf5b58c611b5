import pytest

from weyldouble.catalog import catalog_entry


@pytest.fixture(scope="session")
def entries():
    """Catalog bicharacters, built once so per-object caches are shared."""
    return {name: catalog_entry(name).build()
            for name in ("A1", "A2", "B2", "G2", "A3", "A2-zeta3",
                         "A2-zeta4", "A2-super", "A2-twoparam")}


@pytest.fixture(scope="session")
def a2(entries):
    return entries["A2"]


@pytest.fixture(scope="session")
def two_param(entries):
    return entries["A2-twoparam"]
