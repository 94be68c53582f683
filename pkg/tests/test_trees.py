import numpy as np
import pytest

from doubletop.catdata import CategoryData, dump_category, zoo, _category_from_dict
from doubletop.trees import hexagon_residual, pentagon_residual, shape_moves


@pytest.mark.parametrize("name", ["vec_z3", "fibonacci", "ising"])
def test_moves_are_unitary(name):
    cat = zoo(name)
    n = cat.n
    checked = 0
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    for t in range(n):
                        shapes, moves = shape_moves(cat, (a, b, c, d), t)
                        for key, m in moves.items():
                            if m.size == 0:
                                continue
                            assert np.allclose(m @ m.conj().T,
                                               np.eye(m.shape[0]), atol=1e-12), \
                                (name, (a, b, c, d, t), key)
                            checked += 1
    assert checked > 0


def test_move_dimensions_consistent():
    cat = zoo("ising")
    shapes, moves = shape_moves(cat, (1, 1, 1, 1), 1)  # four sigmas to sigma
    dims = {k: len(s) for k, s in shapes.items()}
    assert len(set(dims.values())) == 1  # all shapes enumerate the same space


def test_pentagon_residual_zoo():
    assert pentagon_residual(zoo("vec_z4")) == 0.0
    assert pentagon_residual(zoo("fibonacci")) < 1e-12
    assert pentagon_residual(zoo("ising")) < 1e-12


def test_hexagon_residual_zoo():
    assert hexagon_residual(zoo("fibonacci")) < 1e-12
    assert hexagon_residual(zoo("ising")) < 1e-12
    assert hexagon_residual(zoo("vec_z2"), rsymbols={(1, 1, 0): 1.0}) < 1e-12
    # the semion braiding on the vec_z2 fusion ring needs the twisted F
    assert hexagon_residual(zoo("vec_z2"), rsymbols={(1, 1, 0): 1.0j}) > 0.1


def test_hexagon_detects_wrong_r():
    cat = zoo("ising")
    bad = dict(cat.rsymbols)
    bad[(2, 2, 0)] = 1.0  # psi self-braiding must be -1
    assert hexagon_residual(cat, rsymbols=bad) > 0.1


def test_semion_hexagon():
    # vec_z2 fusion with F^{ggg}_g = -1 admits the semion braiding R = +/- i
    doc = dump_category(zoo("vec_z2"))
    for ent in doc["sixj"]:
        if ent["labels"][:3] == [1, 1, 1]:
            ent["re"] = -1.0
    cat = _category_from_dict(doc, validate=False)
    assert pentagon_residual(cat) < 1e-12
    assert hexagon_residual(cat, rsymbols={(1, 1, 0): 1.0j}) < 1e-12
    assert hexagon_residual(cat, rsymbols={(1, 1, 0): -1.0j}) < 1e-12
    assert hexagon_residual(cat, rsymbols={(1, 1, 0): 1.0}) > 0.1
