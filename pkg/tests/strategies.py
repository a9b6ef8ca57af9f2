# coding: utf-8
#
"""hypothesis strategies for small graphs and categories"""

import json

from hypothesis import strategies as st

from foldcat import CategoryPresentation, Presentation, Quiver, parse_category, parse_graph, parse_presentation


@st.composite
def quivers(draw, max_vertices: int = 2, max_edges: int = 3) -> Quiver:
    vertices = [f"v{i}" for i in range(draw(st.integers(1, max_vertices)))]
    ends = st.sampled_from(vertices)
    edges = [{"id": f"e{i}", "src": draw(ends), "dst": draw(ends)}
             for i in range(draw(st.integers(0, max_edges)))]
    return parse_graph(json.dumps({"vertices": vertices, "edges": edges}))


@st.composite
def cyclic_groups(draw, max_order: int = 4) -> CategoryPresentation:
    """ Z/n as a one-object category, g0 the identity """
    n = draw(st.integers(1, max_order))
    doc = {
        "objects": ["o"],
        "morphisms": [{"id": f"g{i}", "dom": "o", "cod": "o"} for i in range(n)],
        "identity": {"o": "g0"},
        "composition": [{"left": f"g{i}", "right": f"g{j}", "out": f"g{(i + j) % n}"}
                        for i in range(n) for j in range(n)],
    }
    return parse_category(json.dumps(doc))


@st.composite
def posets(draw, max_objects: int = 3) -> CategoryPresentation:
    """ a random finite poset as a category, m_i_j the arrow i -> j """
    n = draw(st.integers(1, max_objects))
    order = {(i, i) for i in range(n)}
    order |= {(i, j) for i in range(n) for j in range(i + 1, n) if draw(st.booleans())}
    changed = True
    while changed:
        closure = {(i, k) for i, j in order for j2, k in order if j == j2}
        changed = not closure <= order
        order |= closure
    arrow = "m_{}_{}".format
    doc = {
        "objects": [f"p{i}" for i in range(n)],
        "morphisms": [{"id": arrow(i, j), "dom": f"p{i}", "cod": f"p{j}"} for i, j in sorted(order)],
        "identity": {f"p{i}": arrow(i, i) for i in range(n)},
        "composition": [{"left": arrow(i, j), "right": arrow(j, k), "out": arrow(i, k)}
                        for i, j in sorted(order) for j2, k in sorted(order) if j == j2],
    }
    return parse_category(json.dumps(doc))


def finite_categories(max_objects: int = 3, max_order: int = 3):
    return st.one_of(posets(max_objects), cyclic_groups(max_order))


@st.composite
def discrete_presentations(draw, max_objects: int = 5) -> Presentation:
    """ identities only, J a permutation of the objects; nothing is cut, so the frontier is empty """
    n = draw(st.integers(1, max_objects))
    objects = [f"o{i}" for i in range(n)]
    image = draw(st.permutations(objects))
    doc = {
        "objects": objects,
        "arrows": [{"id": f"1_{x}", "dom": x, "cod": x} for x in objects],
        "identity": {x: f"1_{x}" for x in objects},
        "bcomp": [{"left": f"1_{x}", "right": f"1_{x}", "out": f"1_{x}"} for x in objects],
        "J": {f"1_{x}": y for x, y in zip(objects, image)},
    }
    return parse_presentation(json.dumps(doc))
