import pytest
from hypothesis import settings

from treescribe import asset_path
from treescribe.chart import load_data, parse_spec, validate
from treescribe.hierarchy import build_hierarchy

settings.register_profile("suite", deadline=None)
settings.load_profile("suite")


def load_bundled(name: str):
    spec = parse_spec(asset_path(f"{name}_chart.json").read_text(encoding="utf-8"))
    data = load_data(asset_path(spec.data_ref).read_text(encoding="utf-8"))
    return validate(spec, data)


@pytest.fixture(scope="session")
def penguins_chart():
    return load_bundled("penguins")


@pytest.fixture(scope="session")
def penguins_tree(penguins_chart):
    return build_hierarchy(penguins_chart)


@pytest.fixture(scope="session")
def stocks_chart():
    return load_bundled("stocks")


@pytest.fixture(scope="session")
def stocks_tree(stocks_chart):
    return build_hierarchy(stocks_chart)


@pytest.fixture(scope="session")
def temps_chart():
    return load_bundled("temps")


@pytest.fixture(scope="session")
def temps_tree(temps_chart):
    return build_hierarchy(temps_chart)
