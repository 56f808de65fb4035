import json

import pytest

from polysep import poly, semialg

LEMNISCATE = "-16/9*(x1^2+x2^2)^2 + x2^2 - x1^2"
CIRCLE = "1/16 - (x1 - 1/2)^2 - x2^2"
TWO_LOBES = "1/16 - (x1^2 - 1/2)^2 - x2^2"
REFERENCE_P = "1.92876 - 7.71502*x1 + 10.96977*x2^2"

DISK_LEFT = "1/16 - (x1 + 1/2)^2 - x2^2"
DISK_RIGHT = "1/16 - (x1 - 1/2)^2 - x2^2"


@pytest.fixture
def lemniscate_set():
    return semialg.SemialgebraicSet(2, (poly.parse(LEMNISCATE, 2),))


@pytest.fixture
def circle_set():
    return semialg.SemialgebraicSet(2, (poly.parse(CIRCLE, 2),))


@pytest.fixture
def two_lobe_set():
    return semialg.SemialgebraicSet(2, (poly.parse(TWO_LOBES, 2),))


@pytest.fixture
def reference_p():
    return poly.parse(REFERENCE_P, 2)


@pytest.fixture
def disk_sets():
    a = semialg.SemialgebraicSet(2, (poly.parse(DISK_LEFT, 2),))
    b = semialg.SemialgebraicSet(2, (poly.parse(DISK_RIGHT, 2),))
    return a, b


def write_problem(path, n, a_generators, b_generators, options=None):
    data = {"n": n, "A_generators": a_generators, "B_generators": b_generators}
    if options:
        data["options"] = options
    path.write_text(json.dumps(data))
    return str(path)


@pytest.fixture
def lemniscate_problem_file(tmp_path):
    return write_problem(tmp_path / "problem.json", 2, [LEMNISCATE], [CIRCLE])


@pytest.fixture
def two_lobe_problem_file(tmp_path):
    return write_problem(tmp_path / "lobes.json", 2, [LEMNISCATE], [TWO_LOBES])


@pytest.fixture
def disk_problem_file(tmp_path):
    return write_problem(tmp_path / "disks.json", 2, [DISK_LEFT], [DISK_RIGHT])
