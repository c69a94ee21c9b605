"""Build weave diagrams from tessellations and inspect their structure.

Run: python demos/01_build_and_inspect.py
"""

from weavekit.diagram import serialize
from weavekit.tessellation import (
    TransformSpec,
    assign_alternating,
    assign_weaving_map,
    build_tiling,
    classify,
    parse_vertex_symbol,
    read_sequence,
    transform,
)

# The square tiling, two-by-two cell, crossed-curves transform: the plain
# weave skeleton. Over/under is arbitrary until a crossing sequence fixes it.
tiling = build_tiling(parse_vertex_symbol("(4,4,4,4)"), scale=2)
skeleton = transform(tiling, TransformSpec("Cr", 1))
print("plain weave skeleton:", skeleton)
print("classification:", classify(skeleton))

plain = assign_weaving_map(skeleton, {(1, 2): (1, 1)})
print("alternating:", plain.is_alternating())
print("proper:", plain.is_proper()[0], " reduced:", plain.is_reduced()[0])
print("thread sets:", plain.thread_sets())
print("pattern read back from either side:",
      read_sequence(plain, 1, 2), read_sequence(plain, 2, 1))
print()
print(serialize(plain))

# Three thread directions: the kagome weave. Per-pair (1,1) cannot close on
# the one-vertex cell (each thread meets each other set once per period), but
# over/under can still alternate along every walk.
kagome = transform(build_tiling(parse_vertex_symbol("(3,6,3,6)"), 1), TransformSpec("Cr", 1))
kagome_alt = assign_alternating(kagome)
print("kagome:", kagome_alt, "sets:", kagome_alt.thread_sets())
print("kagome alternating:", kagome_alt.is_alternating())

# Doubled-line methods: one twist per edge keeps threads open (a weave),
# two twists close them into rings (a polycatenane).
square1 = build_tiling(parse_vertex_symbol("(4,4,4,4)"), 1)
for m in (1, 2):
    d = transform(square1, TransformSpec("nBr", m))
    print(f"(4Br,{m}):", classify(d), "with", len(d.crossings), "crossings")
