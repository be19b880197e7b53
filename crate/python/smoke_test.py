"""Smoke test for the pyorbivertex extension module."""

import json
from fractions import Fraction

import pyorbivertex as ov


def main():
    assert [p.parts for p in ov.partitions_of(3)] == [[3], [2, 1], [1, 1, 1]]
    p = ov.Partition([2, 2, 1])
    assert p.parts == [2, 2, 1] and len(p) == 3 and p.size() == 5
    assert p.conjugate().kappa() == -p.kappa()

    labels, rows = ov.character_table(3)
    assert labels == [[3], [2, 1], [1, 1, 1]]
    assert rows[1] == [-1, 0, 2]
    assert ov.chi([2, 1], [1, 1, 1]) == 2

    assert Fraction(ov.phi_coefficient([2], [2], 0)) == Fraction(1, 2)
    assert Fraction(ov.hurwitz_number(2, [1], [1])) == 1

    g = ov.g_bullet(1, [1], x_order=0, lambda_order=3)
    assert g.coefficient({"lambda": "-1"}) == "1"
    assert g.coefficient({"lambda": "1"}) == "1/24"
    series = json.loads(g.to_json())
    assert "terms" in series

    r = ov.r_bullet(2, [1], tau=1, x_order=2, lambda_order=3)
    assert json.loads(r.to_json())["vars"]

    passed, checked, failure = ov.verify("correspondence", a=2, d=2, lambda_order=3, x_order=2)
    assert passed and checked > 0 and failure is None, failure

    table = ov.local_cap_table(1, 2, lambda_order=2, x_order=0)
    assert table.splitlines()[0] == "d,boundary,b,gamma,value"

    try:
        ov.Partition([1, 2])
    except ValueError:
        pass
    else:
        raise AssertionError("unsorted partition accepted")

    try:
        ov.verify("nonsense")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown suite accepted")

    print("pyorbivertex", ov.__version__, "smoke test ok")


if __name__ == "__main__":
    main()
