"""The bracket state sum and the invariant stack on small weaves.

Run: python demos/02_bracket_invariants.py
"""

from weavekit.corpus import alternating_corpus
from weavekit.invariants import (
    adequacy,
    bracket,
    bracket_by_skein,
    degree_bounds_check,
    degree_stats,
    jones,
    kauffman_f,
    linking_matrix,
    r_parallel,
    writhe,
)

plain = dict(alternating_corpus())["square-cr-s2"]

b = bracket(plain)
print("bracket:", b.format())
print("same by recursive splitting:", b == bracket_by_skein(plain))
print("writhe:", writhe(plain))
print("normalized:", kauffman_f(plain).format())
print("jones (q = t^1/4):", jones(plain).format())
print()

# Degree formulas for connected reduced alternating diagrams: the extreme
# states pin the degrees, and the span only sees the crossing count.
for name, d in alternating_corpus():
    if len(d.crossings) > 12:
        continue
    st = degree_stats(d)
    C = len(d.crossings)
    print(
        f"{name:14s} C={C:2d} maxdeg={st['maxdeg']:3d} mindeg={st['mindeg']:4d} "
        f"span={st['span']:3d} (= 4C-4g: {st['span'] == 4 * C - 4}) "
        f"W={st['W']} B={st['B']}"
    )
print()

print("linking numbers:", linking_matrix(plain))
print("adequacy:", adequacy(plain))
print("degree bounds:", degree_bounds_check(plain))

doubled = r_parallel(plain, 2)
print("2-parallel:", doubled, "writhe scales by 4:", writhe(doubled) == 4 * writhe(plain))
