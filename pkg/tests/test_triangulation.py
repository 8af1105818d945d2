import itertools
import io

import numpy as np
import pytest

from seifert_dw.errors import ParseError, TriangulationError
from seifert_dw.triangulation import (
    PseudoTriangulation,
    barycentric,
    format_tri,
    from_simplicial,
    integral_h1,
    parse_tri,
    perm_compose,
    perm_inverse,
    perm_sign,
    read_tri,
    validate,
    write_tri,
)
from seifert_dw.triangulation.builders import build_lens, build_surface_times_circle


def one_tet_manifolds():
    """Every closed orientable one-tetrahedron gluing table that validates as a manifold."""
    out = []
    for (f1, g1), (f2, g2) in [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))]:
        for s in itertools.permutations(range(4)):
            if s[f1] != g1:
                continue
            for t in itertools.permutations(range(4)):
                if t[f2] != g2:
                    continue
                rows = [None] * 4
                rows[f1], rows[g1] = (0, s), (0, perm_inverse(s))
                rows[f2], rows[g2] = (0, t), (0, perm_inverse(t))
                tri = PseudoTriangulation([rows])
                r = validate(tri)
                if r.is_manifold and r.orientable:
                    out.append(tri)
    return out


ONE_TET = one_tet_manifolds()


def test_permutation_helpers():
    for p in itertools.permutations(range(4)):
        assert perm_compose(p, perm_inverse(p)) == (0, 1, 2, 3)
        inversions = sum(1 for i in range(4) for j in range(i + 1, 4) if p[i] > p[j])
        assert perm_sign(p) == (-1) ** inversions


# -- validation --------------------------------------------------------------------

def test_validate_two_tet_sphere(s3_two_tets):
    r = validate(s3_two_tets)
    assert r.closed and r.connected and r.orientable
    assert r.euler_characteristic == 0
    assert r.vertex_link_checks == (2, 2, 2, 2)
    assert r.is_manifold
    assert integral_h1(s3_two_tets) == (0, ())


def test_validate_boundary_face():
    ident = (0, 1, 2, 3)
    tri = PseudoTriangulation([[(1, ident), (1, ident), (1, ident), None],
                               [(0, ident), (0, ident), (0, ident), None]])
    r = validate(tri)
    assert not r.closed and not r.is_manifold
    assert validate(PseudoTriangulation([[None] * 4])).closed is False


def test_validate_nonorientable_self_gluing():
    # faces 0<->1 and 2<->3 by the even permutation (01)(23)
    s = (1, 0, 3, 2)
    tri = PseudoTriangulation([[(0, s), (0, s), (0, s), (0, s)]])
    r = validate(tri)
    assert r.closed and r.connected
    assert not r.orientable


def test_one_tet_census_exists():
    assert ONE_TET
    h1s = {integral_h1(t) for t in ONE_TET}
    assert (0, ()) in h1s  # the one-tetrahedron 3-sphere


def test_disconnected_detected(s3_two_tets):
    rows = [list(r) for r in s3_two_tets.gluings]
    shifted = [[(u + 2, p) for u, p in r] for r in rows]
    tri = PseudoTriangulation(rows + shifted)
    assert not validate(tri).connected


@pytest.mark.parametrize("rows, match", [
    ([[(0, (1, 0, 2, 3)), None, None, None]], "inverse|involut"),
    ([[(1, (0, 1, 2, 3)), None, None, None]], "missing"),
    ([[(0, (0, 1, 3, 2)), None, None, None]], "itself"),
])
def test_structural_errors(rows, match):
    with pytest.raises(TriangulationError, match=match):
        PseudoTriangulation(rows)


def test_from_simplicial_boundary_of_4_simplex():
    tets = list(itertools.combinations(range(5), 4))
    tri = from_simplicial(tets)
    r = validate(tri)
    assert r.is_manifold and r.orientable
    assert r.counts == (5, 10, 10, 5)
    with pytest.raises(TriangulationError):
        from_simplicial([(0, 0, 1, 2)])


# -- barycentric subdivision --------------------------------------------------------

@pytest.mark.parametrize("k", range(len(ONE_TET)))
def test_barycentric_one_tet(k):
    tri = ONE_TET[k]
    v, e, f, t = tri.cells.counts
    c = barycentric(tri)
    assert c.counts[3] == 24
    assert c.counts[0] == v + e + f + 1
    if v == 1:
        assert c.counts[0] == 1 + e + f + 1
    assert c.audit_order()
    assert c.euler_characteristic() == 0


def test_barycentric_two_tet_sphere(s3_two_tets):
    c = barycentric(s3_two_tets)
    assert c.counts[3] == 48
    assert c.euler_characteristic() == 0
    assert c.audit_order()


def test_barycentric_refuses_open_input():
    with pytest.raises(TriangulationError):
        barycentric(PseudoTriangulation([[None] * 4]))


def test_barycentric_face_maps_are_order_preserving():
    # recompute the audit independently from the vertex lists
    c = barycentric(build_lens(5, 2))
    for k in (1, 2, 3):
        faces, verts, lower = c.faces[k], c.vertices[k], c.vertices[k - 1]
        for i in range(k + 1):
            expected = np.delete(verts, i, axis=1)
            assert (lower[faces[:, i]] == expected).all()
        assert (np.diff(verts, axis=1) > 0).all() or k == 0


def test_barycentric_of_nonorientable_table():
    # a closed non-orientable pseudo-manifold still subdivides with 24 tets per tet
    s = (1, 0, 3, 2)
    tri = PseudoTriangulation([[(0, s), (0, s), (0, s), (0, s)]])
    c = barycentric(tri)
    assert c.counts[3] == 24 and c.audit_order()


# -- integral homology ----------------------------------------------------------------

@pytest.mark.parametrize("p, q", [(1, 0), (2, 1), (5, 2), (8, 3), (12, 5)])
def test_integral_h1_lens(p, q):
    assert integral_h1(build_lens(p, q)) == (0, (p,) if p > 1 else ())


def test_integral_h1_products():
    assert integral_h1(build_surface_times_circle(0)) == (1, ())
    assert integral_h1(build_surface_times_circle(1)) == (3, ())


# -- file format ------------------------------------------------------------------------

def test_round_trip(s3_two_tets, tmp_path):
    path = tmp_path / "s3.tri"
    write_tri(s3_two_tets, path)
    text = path.read_text()
    assert text.startswith("tets 2\n") and text.endswith("\n")
    assert read_tri(path) == s3_two_tets
    buf = io.StringIO()
    write_tri(s3_two_tets, buf)
    assert read_tri(io.StringIO(buf.getvalue())) == s3_two_tets


@pytest.mark.parametrize("tri", [build_lens(7, 3), build_surface_times_circle(1)] + ONE_TET[:3])
def test_round_trip_builders(tri):
    assert parse_tri(format_tri(tri)) == tri


def test_exact_format(s3_two_tets):
    assert format_tri(s3_two_tets) == "tets 2\n0 1:0123 1:0123 1:0123 1:0123\n1 0:0123 0:0123 0:0123 0:0123\n"


def test_comments_and_blank_lines(s3_two_tets):
    text = "# two tetrahedra\n\ntets 2\n0 1:0123 1:0123 1:0123 1:0123\n# mid\n1 0:0123 0:0123 0:0123 0:0123\n"
    assert parse_tri(text) == s3_two_tets


@pytest.mark.parametrize("text, line", [
    ("tets 1\n0 0:1032 0:1032 0:1032 0:1032\n1 b b b b\n", 3),
    ("tet 1\n", 1),
    ("tets 1\n0 b b b\n", 2),
    ("tets 1\n1 b b b b\n", 2),
    ("tets 1\n0 b b b 0:0122\n", 2),
    ("tets 1\n0 b b b 3:0123\n", 2),
    ("tets 1\n0 b b b x\n", 2),
])
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as exc:
        parse_tri(text)
    assert exc.value.line == line


def test_parse_errors_without_line():
    with pytest.raises(ParseError):
        parse_tri("")
    with pytest.raises(ParseError):
        parse_tri("tets 2\n0 b b b b\n")


def test_non_involutive_file_is_a_validation_error():
    text = "tets 2\n0 1:0123 b b b\n1 b b b b\n"
    with pytest.raises(TriangulationError) as exc:
        parse_tri(text)
    assert not isinstance(exc.value, ParseError)
