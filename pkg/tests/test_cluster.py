import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from clusterbound.cluster import (
    ClusterError,
    ProximityStructure,
    WeightedCluster,
    dumps_cluster,
    excesses,
    is_consistent,
    loads_cluster,
    read_cluster,
    scheme_degree,
    validate,
    write_cluster,
)
from clusterbound.specialization import build_chain

from conftest import clusters
from oracles import excess_by_matrix


def structure(r, pairs):
    return ProximityStructure.from_pairs(r, pairs)


def test_validate_accepts_satellite_chain():
    assert validate(structure(3, [(2, 1), (3, 2), (3, 1)])).ok


def test_validate_rejects_missing_satellite_base():
    result = validate(structure(3, [(3, 1), (3, 2)]))
    assert not result.ok
    assert [v.rule for v in result.violations] == ["satellite"]
    assert result.violations[0].pair == (3, 1, 2)


def test_validate_rejects_wrong_order():
    result = validate(structure(2, [(1, 2)]))
    assert [v.rule for v in result.violations] == ["ordering"]
    assert result.violations[0].pair == (1, 2)


def test_validate_rejects_three_proximities():
    result = validate(structure(4, [(2, 1), (3, 1), (3, 2), (4, 1), (4, 2), (4, 3)]))
    assert "at-most-two" in [v.rule for v in result.violations]


def test_validate_rejects_out_of_range_point():
    assert not validate(structure(3, [(5, 1)])).ok


def test_validate_rejects_two_satellites_on_one_corner():
    result = validate(structure(4, [(2, 1), (3, 1), (3, 2), (4, 1), (4, 2)]))
    assert [v.rule for v in result.violations] == ["unique-satellite"]


def test_proper_points_allowed():
    assert validate(structure(3, [])).ok
    assert validate(structure(4, [(2, 1), (4, 3)])).ok


@pytest.mark.parametrize(
    "r, pairs, m, rho",
    [
        (2, [(2, 1)], (0, 1), (-1, 1)),
        (2, [], (5, 7), (5, 7)),
        (4, [(2, 1), (3, 2), (3, 1), (4, 3)], (2, 2, 2, 2), (-2, 0, 0, 2)),
    ],
)
def test_excesses_examples(r, pairs, m, rho):
    assert excesses(WeightedCluster.build(r, pairs, m)) == rho


@given(clusters())
def test_excesses_match_matrix_route(c):
    assert excesses(c) == excess_by_matrix(c.r, c.structure.prox, c.m)


@given(clusters(), st.data())
def test_excesses_linear(c, data):
    other = data.draw(st.lists(st.integers(-20, 20), min_size=c.r, max_size=c.r))
    total = c.with_multiplicities([a + b for a, b in zip(c.m, other)])
    lhs = excesses(total)
    rhs = tuple(a + b for a, b in zip(excesses(c), excesses(c.with_multiplicities(other))))
    assert lhs == rhs


@given(st.lists(st.integers(-20, 20), min_size=1, max_size=12))
def test_chain_excesses(m):
    r = len(m)
    c = WeightedCluster.build(r, [(j, j - 1) for j in range(2, r + 1)], m)
    expected = tuple(m[i] - m[i + 1] for i in range(r - 1)) + (m[-1],)
    assert excesses(c) == expected


def test_empty_structure_excess_is_identity():
    c = WeightedCluster.build(3, [], (4, -1, 0))
    assert excesses(c) == c.m


@pytest.mark.parametrize(
    "pairs, m, expected",
    [([(2, 1)], (1, 0), True), ([(2, 1)], (0, 1), False), ([], (0, 0, 0), True)],
)
def test_is_consistent(pairs, m, expected):
    assert is_consistent(WeightedCluster.build(len(m), pairs, m)) is expected


@pytest.mark.parametrize(
    "pairs, m, degree",
    [
        ([(2, 1)], (1, 0), 1),
        ([(2, 1), (3, 2), (3, 1)], (2, 0, 0), 3),
        ([(2, 1), (3, 2), (3, 1), (4, 3)], (3, 2, 1, 1), 11),
    ],
)
def test_scheme_degree(pairs, m, degree):
    c = WeightedCluster.build(len(m), pairs, m)
    assert is_consistent(c)
    assert scheme_degree(c) == degree


def test_scheme_degree_rejects_bad_input():
    with pytest.raises(ClusterError):
        scheme_degree(WeightedCluster.build(2, [(2, 1)], (0, 1)))
    with pytest.raises(ClusterError):
        scheme_degree(WeightedCluster.build(2, [], (1, -1)))


def test_length_mismatch():
    with pytest.raises(ClusterError):
        WeightedCluster.build(3, [], (1, 2))


def test_build_chain_structures_validate():
    for r in range(2, 51):
        for i in range(2, r + 1):
            assert validate(build_chain(r, i)).ok, (r, i)


def test_intersection_matrix():
    s = build_chain(4, 3)
    g = s.intersection_matrix()
    assert list(np.diag(g)) == [-3, -2, -2, -1]
    assert np.all(np.linalg.eigvalsh(g.astype(float)) < 0)
    off = g - np.diag(np.diag(g))
    assert np.all(off >= 0)


@given(clusters())
def test_intersection_matrix_offdiagonal_nonnegative(c):
    g = c.structure.intersection_matrix()
    off = g - np.diag(np.diag(g))
    assert np.all(off >= 0)
    m = np.array(c.m)
    assert tuple(c.structure.matrix() @ m) == excesses(c)


# file format -----------------------------------------------------------------


def test_file_roundtrip(tmp_path):
    c = WeightedCluster.build(4, [(4, 3), (2, 1), (3, 2), (3, 1)], (2, 2, 2, -2))
    text = dumps_cluster(c)
    assert text == (
        '{\n  "points": 4,\n  "proximities": [[2, 1], [3, 1], [3, 2], [4, 3]],\n'
        '  "multiplicities": [2, 2, 2, -2]\n}\n'
    )
    assert loads_cluster(text) == c
    assert dumps_cluster(loads_cluster(text)) == text
    path = tmp_path / "c.json"
    write_cluster(c, path)
    assert read_cluster(path) == c


@given(clusters())
def test_file_roundtrip_random(c):
    text = dumps_cluster(c)
    assert loads_cluster(text) == c
    assert dumps_cluster(loads_cluster(text)) == text
    assert json.loads(text)["points"] == c.r


def test_file_accepts_other_json_layouts():
    c = loads_cluster('{"multiplicities":[0,1],"proximities":[[2,1]],"points":2}')
    assert c.m == (0, 1)


@pytest.mark.parametrize(
    "text, fragment",
    [
        ('{"points": 2,\n "proximities": [[2, 1]],\n "multiplicities": [0, 1', "line 3"),
        ('{"points": 2, "proximities": [[2, 1]]}', "multiplicities"),
        ('{"points": 2, "proximities": [[2, 1]], "multiplicities": [0, "x"]}', "multiplicities[1]"),
        ('{"points": 2, "proximities": [[1, 2]], "multiplicities": [0, 1]}', "proximities"),
        ('{"points": 2, "proximities": [[2]], "multiplicities": [0, 1]}', "proximities[0]"),
        ('{"points": 2, "proximities": [], "multiplicities": [0]}', "expected 2 entries"),
        ('{"points": true, "proximities": [], "multiplicities": [0]}', "points"),
        ('{"points": 1, "proximities": [], "multiplicities": [0], "x": 1}', "unknown field"),
        ("[1, 2]", "JSON object"),
    ],
)
def test_file_errors_name_location(text, fragment):
    with pytest.raises(ClusterError, match=None) as exc:
        loads_cluster(text)
    assert fragment in str(exc.value)
