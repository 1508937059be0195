#!/usr/bin/env python3
"""Regenerate the small DIMACS clique instances used by the test suites.

The files are built from the combinatorial definitions of the second DIMACS
challenge families (clique formulation, 1-based vertices):

  johnsonN_W_D  vertices are W-subsets of {1..N}; adjacent iff the symmetric
                difference has size >= D.
  hammingN_D    vertices are N-bit words; adjacent iff Hamming distance >= D.
  MANN_aV       clique formulation of the Steiner triple covering problem on
                the affine plane AG(2,3) (V = 9): one vertex per (triple, point)
                incidence plus one vertex per point; the complement joins the
                three vertices of a triple and each incidence vertex to its
                point vertex.
"""
import itertools
import pathlib
import sys


def write(path, n, edges, comment):
    edges = sorted(set((min(i, j), max(i, j)) for i, j in edges))
    with open(path, "w", newline="\n") as f:
        f.write(f"c {comment}\n")
        f.write(f"p edge {n} {len(edges)}\n")
        for i, j in edges:
            f.write(f"e {i + 1} {j + 1}\n")


def johnson(n, w, d):
    verts = [frozenset(c) for c in itertools.combinations(range(n), w)]
    edges = [(a, b) for a, b in itertools.combinations(range(len(verts)), 2)
             if len(verts[a] ^ verts[b]) >= d]
    return len(verts), edges


def hamming(bits, d):
    n = 1 << bits
    edges = [(a, b) for a, b in itertools.combinations(range(n), 2)
             if bin(a ^ b).count("1") >= d]
    return n, edges


def mann_a9():
    points = [(x, y) for x in range(3) for y in range(3)]
    lines = set()
    for p, q in itertools.combinations(points, 2):
        r = ((-p[0] - q[0]) % 3, (-p[1] - q[1]) % 3)
        lines.add(frozenset(points.index(v) for v in (p, q, r)))
    lines = sorted(sorted(l) for l in lines)
    assert len(lines) == 12
    incidence = [(t, pt) for t, line in enumerate(lines) for pt in line]
    n = len(incidence) + len(points)
    point_vertex = {pt: len(incidence) + pt for pt in range(len(points))}
    non_edges = set()
    for a, b in itertools.combinations(range(len(incidence)), 2):
        if incidence[a][0] == incidence[b][0]:
            non_edges.add((a, b))
    for a, (_, pt) in enumerate(incidence):
        non_edges.add((a, point_vertex[pt]))
    edges = [e for e in itertools.combinations(range(n), 2) if e not in non_edges]
    return n, edges


def main(out_dir):
    out = pathlib.Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write(out / "johnson8_2_4.clq", *johnson(8, 2, 4), "johnson8_2_4")
    write(out / "johnson8_4_4.clq", *johnson(8, 4, 4), "johnson8_4_4")
    write(out / "johnson16_2_4.clq", *johnson(16, 2, 4), "johnson16_2_4")
    write(out / "hamming6_2.clq", *hamming(6, 2), "hamming6_2")
    write(out / "hamming6_4.clq", *hamming(6, 4), "hamming6_4")
    write(out / "MANN_a9.clq", *mann_a9(), "MANN_a9")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else pathlib.Path(__file__).parent / "dimacs")
