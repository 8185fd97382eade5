"""
The Gruenbaum graph and the dither sequence it yields
=====================================================

The smallest 4-regular graph of girth 5 that needs four colors has 25
vertices.  Removing a Hamiltonian path leaves a graph whose own Hamiltonian
paths, read as vertex sequences, are short permutations with a large
"spread".  Those permutations seed the interleaver.
"""

from gruenbaum_ira import graph, interleaver

g = graph.gruenbaum_graph()
report = graph.validate_graph(g)
print(f"{report.vertex_count} vertices, {report.edge_count} edges, "
      f"degree {report.regular_degree}, girth {report.girth}")

# a Hamiltonian path through the whole graph; the vertex numbering follows it
ham = graph.find_hamiltonian_path(g, 0)
print("first Hamiltonian path:", ham.vertices[:8], "...")

# deleting the path's edges leaves a sparse graph, relabeled by path position
res = graph.residual_graph(g, ham)
print("residual graph edges:", len(res.edges))

# every Hamiltonian path of the residual is a candidate dither sequence
paths = list(graph.iter_hamiltonian_paths(res))
print(f"{len(paths)} Hamiltonian paths in the residual graph")

gr25 = interleaver.gr25()
print("Gr25 =", list(gr25.values))
print("Gr25 is one of them:", any(list(p) == list(gr25.values) for p in paths))

# s-random spread: min |i-j| + |pi(i)-pi(j)|
for name, seq in (("Gr25", gr25), ("Gr24", interleaver.gr24()),
                  ("reference table", interleaver.reference_table())):
    print(f"{name:13s} spread {interleaver.s_random_metric(seq)}")
