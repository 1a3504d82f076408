from hypothesis import strategies as st

from pnmds.generators import gen_random_triangulation
from pnmds.port_graph import from_edge_list


@st.composite
def simple_graphs(draw, max_n=12):
    """Arbitrary simple graphs; edge order (hence port numbering) and orientation are drawn too."""
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    flips = draw(st.lists(st.booleans(), min_size=len(chosen), max_size=len(chosen)))
    return from_edge_list(n, [(v, u) if f else (u, v) for (u, v), f in zip(chosen, flips)])


@st.composite
def triangulations(draw, max_n=40):
    n = draw(st.integers(3, max_n))
    seed = draw(st.integers(0, 2**32))
    keep = draw(st.sampled_from([1.0, 0.9, 0.7, 0.5, 0.3]))
    return gen_random_triangulation(n, seed, keep)


planar_or_simple = st.one_of(simple_graphs(), triangulations())
