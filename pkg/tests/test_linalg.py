from fractions import Fraction as Q

import pytest

from orthoforms import linalg


def test_inverse_known():
    m = ((2, -1), (-1, 2))
    assert linalg.inverse(m) == ((Q(2, 3), Q(1, 3)), (Q(1, 3), Q(2, 3)))


def test_inverse_identity_property():
    m = ((2, -1, 0), (-1, 2, -1), (0, -1, 2))
    inv = linalg.inverse(m)
    assert linalg.mat_mul(inv, m) == linalg.identity(3)


def test_inverse_singular():
    with pytest.raises(ValueError):
        linalg.inverse(((1, 1), (1, 1)))


def test_det():
    assert linalg.det(((2,),)) == 2
    assert linalg.det(((2, -1), (-1, 2))) == 3
    assert linalg.det(((1, 2), (3, 4))) == -2
    assert linalg.det(((1, 1), (1, 1))) == 0


def test_smith_normal_form():
    assert linalg.smith_normal_form([[2]]) == (2,)
    assert linalg.smith_normal_form([[2, -1], [-1, 2]]) == (1, 3)
    assert linalg.smith_normal_form([[2, 0], [0, 2]]) == (2, 2)
    # divisibility chain
    diag = linalg.smith_normal_form([[4, 0, 0], [0, 6, 0], [0, 0, 10]])
    for a, b in zip(diag, diag[1:]):
        assert b % a == 0


def test_ldl_positive_definite():
    assert linalg.is_positive_definite(((2, -1), (-1, 2)))
    assert not linalg.is_positive_definite(((1, 0), (0, -1)))
    assert not linalg.is_positive_definite(((0, 1), (1, 0)))


def test_ldl_reconstructs_form():
    gram = ((2, -1, 0), (-1, 2, -1), (0, -1, 2))
    d, u = linalg.ldl(gram)
    v = (3, -2, 5)
    direct = sum(gram[i][j] * v[i] * v[j] for i in range(3) for j in range(3))
    via_ldl = sum(
        d[i] * (v[i] + sum(u[i][j] * v[j] for j in range(i + 1, 3))) ** 2
        for i in range(3)
    )
    assert direct == via_ldl


def test_short_vectors_of_form_matches_box_enumeration():
    gram = ((2, -1), (-1, 2))
    got = set(linalg.short_vectors_of_form(gram, 6))
    box = set()
    for x in range(-4, 5):
        for y in range(-4, 5):
            if (x, y) != (0, 0) and 2 * x * x - 2 * x * y + 2 * y * y <= 6:
                box.add((x, y))
    assert got == box


def test_rank_and_solve():
    assert linalg.rank(((1, 2), (2, 4))) == 1
    assert linalg.solve(((2, 0), (0, 3)), (4, 9)) == (Q(2), Q(3))
    assert linalg.solve(((1, 1), (1, 1)), (1, 2)) is None
