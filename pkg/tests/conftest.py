import pathlib

import pytest

from extriang.fixtures import build_example51

GOLDEN_DIR = pathlib.Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def bundle():
    return build_example51(p=2, bound=2)


@pytest.fixture(scope="session")
def b_indices(bundle):
    n = bundle.lambda_names
    return {
        "P1;0": n["[P1;0]_0"],
        "P1;P1": n["[P1;P1]_1"],
        "S2;0": n["[S2;0]_0"],
        "0;P1": n["[0;P1]_0"],
    }


@pytest.fixture(scope="session")
def golden_torsion_pairs():
    return (GOLDEN_DIR / "torsion_pairs_b_ext.json").read_text()
