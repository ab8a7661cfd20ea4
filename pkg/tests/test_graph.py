from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skipmatch import (
    GeneratorSpec,
    Graph,
    GraphFormatError,
    build_csr,
    generate,
    load_edge_list_binary,
    load_edge_list_text,
    write_edge_list_binary,
    write_edge_list_text,
)
from skipmatch.graph import BINARY_MAGIC, load_edge_list


def write(tmp_path, text, name="g.txt"):
    p = tmp_path / name
    p.write_text(text)
    return p


@st.composite
def edge_lists(draw, max_n=12, max_m=40):
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(0, max_m))
    edges = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), min_size=m, max_size=m))
    return n, edges


# -- text loader -----------------------------------------------------------

def test_text_basic(tmp_path):
    g = load_edge_list_text(write(tmp_path, "0 1\n1 2\n"))
    assert g.num_vertices == 3
    assert g.edges.tolist() == [[0, 1], [1, 2]]


def test_text_vertex_header(tmp_path):
    g = load_edge_list_text(write(tmp_path, "# vertices: 5\n0 1\n"))
    assert g.num_vertices == 5
    assert g.degrees().tolist() == [1, 1, 0, 0, 0]


def test_text_self_loop_kept(tmp_path):
    g = load_edge_list_text(write(tmp_path, "0 0\n"))
    assert g.num_vertices == 1
    assert g.edges.tolist() == [[0, 0]]


def test_text_comments_blank_and_duplicates(tmp_path):
    g = load_edge_list_text(write(tmp_path, "% header\n\n# note\n2 1\n2 1\n  3\t0 \n"))
    assert g.edges.tolist() == [[2, 1], [2, 1], [3, 0]]
    assert g.num_vertices == 4


@pytest.mark.parametrize(
    "text, lineno",
    [("0 1\n1 x\n", 2), ("0 1\n\n1 2 3\n", 3), ("-1 2\n", 1), ("# c\n7\n", 2)],
)
def test_text_parse_error_names_line(tmp_path, text, lineno):
    with pytest.raises(GraphFormatError, match=f"line {lineno}"):
        load_edge_list_text(write(tmp_path, text))


def test_text_overflow(tmp_path):
    with pytest.raises(GraphFormatError, match="overflow"):
        load_edge_list_text(write(tmp_path, f"0 {2**64}\n"))


def test_text_header_smaller_than_ids(tmp_path):
    with pytest.raises(GraphFormatError):
        load_edge_list_text(write(tmp_path, "# vertices: 2\n0 5\n"))


def test_text_empty_file(tmp_path):
    g = load_edge_list_text(write(tmp_path, ""))
    assert g.num_vertices == 0 and g.num_edges == 0


# -- binary format ---------------------------------------------------------

def test_binary_single_edge(tmp_path):
    p = tmp_path / "g.bin"
    p.write_bytes(BINARY_MAGIC + (2).to_bytes(8, "little") + (1).to_bytes(8, "little")
                  + (0).to_bytes(8, "little") + (1).to_bytes(8, "little"))
    g = load_edge_list_binary(p)
    assert g.edges.tolist() == [[0, 1]]
    assert g.num_vertices == 2


def test_binary_layout(tmp_path):
    g = Graph(4, [[3, 1]])
    p = tmp_path / "g.bin"
    write_edge_list_binary(g, p)
    raw = p.read_bytes()
    assert len(raw) == 24 + 16
    assert raw[:8] == b"SKPEL1\0\0"
    assert int.from_bytes(raw[8:16], "little") == 4
    assert int.from_bytes(raw[16:24], "little") == 1
    assert int.from_bytes(raw[24:32], "little") == 3


def test_binary_empty_graph_with_vertices(tmp_path):
    p = tmp_path / "g.bin"
    write_edge_list_binary(Graph(4, np.empty((0, 2))), p)
    g = load_edge_list_binary(p)
    assert (g.num_vertices, g.num_edges) == (4, 0)


def test_binary_bad_magic(tmp_path):
    p = tmp_path / "g.bin"
    p.write_bytes(b"NOTMAGIC" + bytes(16))
    with pytest.raises(GraphFormatError, match="magic"):
        load_edge_list_binary(p)


@pytest.mark.parametrize("cut", [5, 24 + 8, 24 + 15])
def test_binary_truncated(tmp_path, cut):
    p = tmp_path / "g.bin"
    write_edge_list_binary(Graph(3, [[0, 1]]), p)
    p.write_bytes(p.read_bytes()[:cut])
    with pytest.raises(GraphFormatError):
        load_edge_list_binary(p)


def test_text_binary_equivalence(tmp_path):
    txt = write(tmp_path, "# vertices: 6\n0 1\n1 2\n2 2\n1 0\n")
    g = load_edge_list_text(txt)
    b = tmp_path / "g.bin"
    write_edge_list_binary(g, b)
    assert load_edge_list_binary(b).same_as(g)
    assert load_edge_list(b, "binary").same_as(load_edge_list(txt, "text"))


@settings(max_examples=60, deadline=None)
@given(edge_lists())
def test_round_trips(tmp_path_factory, nm):
    n, edges = nm
    g = Graph(n, np.array(edges, dtype=np.int64).reshape(-1, 2))
    d = tmp_path_factory.mktemp("rt")
    write_edge_list_binary(g, d / "g.bin")
    write_edge_list_text(g, d / "g.txt")
    assert load_edge_list_binary(d / "g.bin").same_as(g)
    assert load_edge_list_text(d / "g.txt").same_as(g)


# -- CSR -------------------------------------------------------------------

def test_csr_path():
    g = build_csr([(0, 1), (1, 2)], 3)
    assert g.csr_offsets.tolist() == [0, 1, 3, 4]
    assert g.csr_neighbors.tolist() == [1, 0, 2, 1]


def test_csr_empty():
    g = build_csr([], 2)
    assert g.csr_offsets.tolist() == [0, 0, 0]
    assert g.csr_neighbors.tolist() == []


def test_csr_self_loop_counts_twice():
    g = build_csr([(0, 0)], 1)
    # brute-force degree: each endpoint occurrence contributes one slot
    brute = Counter()
    for u, v in [(0, 0)]:
        brute[u] += 1
        brute[v] += 1
    assert g.degrees().tolist() == [brute[0]] == [2]
    assert g.csr_offsets.tolist() == [0, 2]
    assert g.csr_neighbors.tolist() == [0, 0]


def test_csr_out_of_range():
    with pytest.raises(GraphFormatError):
        build_csr([(0, 3)], 3)


@settings(max_examples=100, deadline=None)
@given(edge_lists())
def test_csr_invariants(nm):
    n, edges = nm
    g = build_csr(edges, n)
    off, nbr = g.csr_offsets, g.csr_neighbors
    assert len(off) == n + 1 and off[0] == 0 and off[-1] == len(nbr)
    assert np.all(np.diff(off) >= 0)
    assert int(g.degrees().sum()) == 2 * len(edges)
    for v in range(n):
        seg = nbr[off[v]:off[v + 1]]
        assert np.all(seg[:-1] <= seg[1:])
        # brute-force neighbor multiset
        expect = sorted([y for x, y in edges if x == v] + [x for x, y in edges if y == v])
        assert seg.tolist() == expect
    canon = Counter((min(x, y), max(x, y)) for x, y in edges)
    assert Counter(map(tuple, g.edges_from_csr().tolist())) == canon


def test_graph_is_immutable():
    src = np.array([[0, 1]])
    g = Graph(2, src)
    src[0, 0] = 1
    assert g.edges.tolist() == [[0, 1]]
    with pytest.raises(ValueError):
        g.edges[0, 0] = 1
    with pytest.raises(ValueError):
        g.csr_neighbors[0] = 0
    with pytest.raises(AttributeError):
        g.num_vertices = 5


# -- generators ------------------------------------------------------------

def test_path_cycle_star_complete():
    assert generate(GeneratorSpec("path", 3)).edges.tolist() == [[0, 1], [1, 2]]
    assert generate(GeneratorSpec("cycle", 4)).edges.tolist() == [[0, 1], [1, 2], [2, 3], [3, 0]]
    assert generate(GeneratorSpec("star", 4)).edges.tolist() == [[0, 1], [0, 2], [0, 3]]
    k4 = generate(GeneratorSpec("complete", 4))
    assert k4.num_edges == 6
    assert k4.edges.tolist() == [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]


def test_degenerate_sizes():
    assert generate(GeneratorSpec("path", 1)).num_edges == 0
    assert generate(GeneratorSpec("cycle", 1)).edges.tolist() == [[0, 0]]
    assert generate(GeneratorSpec("star", 1)).num_edges == 0
    assert generate(GeneratorSpec("complete", 1)).num_edges == 0


@pytest.mark.parametrize("n", [1, 2, 5, 10, 1000])
def test_complete_edge_count(n):
    assert generate(GeneratorSpec("complete", n)).num_edges == n * (n - 1) // 2


def test_complete_guard():
    with pytest.raises(ValueError, match="refused"):
        GeneratorSpec("complete", 65537)


def test_gnm_deterministic():
    a = generate(GeneratorSpec("gnm_random", 1000, 5000, seed=42))
    b = generate(GeneratorSpec("gnm_random", 1000, 5000, seed=42))
    c = generate(GeneratorSpec("gnm_random", 1000, 5000, seed=43))
    assert a.same_as(b)
    assert not a.same_as(c)
    assert a.num_edges == 5000 and a.edges.max() < 1000


def test_gnm_self_loop_rate():
    g = generate(GeneratorSpec("gnm_random", 10, 200_000, seed=1))
    rate = np.mean(g.edges[:, 0] == g.edges[:, 1])
    # binomial sd at p=0.1, m=2e5 is ~6.7e-4
    assert abs(rate - 0.1) < 0.005


def test_rmat_deterministic_and_skewed():
    spec = GeneratorSpec("rmat", 2**12, 50_000, seed=7)
    a, b = generate(spec), generate(spec)
    assert a.same_as(b)
    assert a.num_edges == 50_000 and a.edges.max() < 2**12
    # quadrant a dominates: the top-left 2^11 x 2^11 block holds ~0.57 of edges
    top_left = np.mean((a.edges[:, 0] < 2**11) & (a.edges[:, 1] < 2**11))
    assert abs(top_left - 0.57) < 0.01


def test_rmat_non_power_of_two():
    g = generate(GeneratorSpec("rmat", 1000, 10_000, seed=3))
    assert g.num_edges == 10_000 and g.edges.max() < 1000


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(family="tree", n=3),
        dict(family="path", n=0),
        dict(family="gnm_random", n=5),
        dict(family="rmat", n=8, m=10, rmat_probs=(0.5, 0.2, 0.2, 0.2)),
        dict(family="rmat", n=8, m=10, rmat_probs=(0.5, 0.5, 0.0)),
    ],
)
def test_generator_spec_validation(kwargs):
    with pytest.raises(ValueError):
        GeneratorSpec(**kwargs)


def test_rmat_probs_tolerance():
    GeneratorSpec("rmat", 8, 1, rmat_probs=(0.25, 0.25, 0.25, 0.25 + 5e-10))
