"""Small standard triangulations used by the tests, the CLI and the docs."""

from __future__ import annotations

from .complex import SimplicialComplex, build_complex


def point() -> SimplicialComplex:
    return build_complex([[0]])


def interval() -> SimplicialComplex:
    return build_complex([[0, 1]])


def circle(n: int = 3) -> SimplicialComplex:
    """Boundary of an n-gon, n >= 3."""
    if n < 3:
        raise ValueError("a simplicial circle needs at least 3 vertices")
    return build_complex([[i, (i + 1) % n] for i in range(n)])


def disk(n: int = 6) -> SimplicialComplex:
    """Cone from vertex n over an n-gon."""
    return build_complex([[i, (i + 1) % n, n] for i in range(n)])


def triangle() -> SimplicialComplex:
    return build_complex([[0, 1, 2]])


def octahedron() -> SimplicialComplex:
    """Boundary of the octahedron: a 2-sphere with 6 vertices and 8 triangles."""
    # poles 0/5, equator 1-2-3-4
    tris = []
    for i in range(4):
        a, b = 1 + i, 1 + (i + 1) % 4
        tris.append([0, a, b])
        tris.append([5, a, b])
    return build_complex(tris)


def torus() -> SimplicialComplex:
    """Möbius's 7-vertex torus."""
    tris = []
    for i in range(7):
        tris.append([i, (i + 1) % 7, (i + 3) % 7])
        tris.append([i, (i + 2) % 7, (i + 3) % 7])
    return build_complex(tris)


def projective_plane() -> SimplicialComplex:
    """The 6-vertex real projective plane (hemi-icosahedron)."""
    return build_complex([
        [0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 1, 5],
        [1, 2, 4], [1, 3, 4], [1, 3, 5], [2, 3, 5], [2, 4, 5],
    ])


def mobius_band(n: int = 3) -> SimplicialComplex:
    from .bundles import mapping_torus

    return mapping_torus(interval(), {0: 1, 1: 0}, n).total


def klein_bottle(n: int = 3) -> SimplicialComplex:
    from .bundles import mapping_torus

    return mapping_torus(circle(3), {0: 0, 1: 2, 2: 1}, n).total


def cylinder(n: int = 3) -> SimplicialComplex:
    from .bundles import mapping_torus

    return mapping_torus(interval(), {0: 0, 1: 1}, n).total


CLOSED_FIXTURES = {
    "point": point,
    "interval": interval,
    "circle": circle,
    "disk": disk,
    "sphere": octahedron,
    "torus": torus,
    "mobius": mobius_band,
    "projective_plane": projective_plane,
    "klein_bottle": klein_bottle,
}

# rational Betti numbers of each fixture
BETTI = {
    "point": [1],
    "interval": [1, 0],
    "circle": [1, 1],
    "disk": [1, 0, 0],
    "sphere": [1, 0, 1],
    "torus": [1, 2, 1],
    "mobius": [1, 1, 0],
    "projective_plane": [1, 0, 0],
    "klein_bottle": [1, 1, 0],
}
