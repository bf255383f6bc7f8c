"""Tour of the exact abelian-group toolkit.

Everything downstream rests on these four operations: Smith normal form
with its unimodular transforms, primary decomposition with explicit
inverse isomorphisms, kernels of homomorphisms as abstract groups with
inclusions, and deterministic solving of h(x) = target.
"""

from extdecide import FgAbGroup, GroupHom, kernel, primary_decomposition, snf, solve

print("== Smith normal form ==")
matrix = [[2, 4], [6, 8]]
result = snf(matrix)
print(f"  A = {matrix}")
print(f"  D = {[list(r) for r in result.D]}   (invariant factors {list(result.diagonal)})")
print(f"  U = {[list(r) for r in result.U]}")
print(f"  V = {[list(r) for r in result.V]}")
print("  U*A*V = D with |det U| = |det V| = 1 and 2 | 4")
print()

print("== Primary decomposition ==")
group = FgAbGroup((0, 60))
decomposed, forward, backward = primary_decomposition(group)
print(f"  {group!r}  ->  {decomposed!r}")
e = group.element((1, 7))
print(f"  element {e.coords} maps to {forward(e).coords} and back to "
      f"{backward(forward(e)).coords}")
assert backward.compose(forward) == GroupHom.identity(group)
print("  the two homomorphisms compose to the identity, both ways")
print()

print("== Kernels, computed not assumed ==")
h = GroupHom(FgAbGroup((8,)), FgAbGroup((4,)), [[1]])
ker, inject = kernel(h)
print(f"  reduction Z/8 -> Z/4 has kernel {ker!r}, "
      f"generated by {inject(ker.generator(0)).coords[0]}")
h2 = GroupHom(FgAbGroup((0,)), FgAbGroup((2,)), [[1]])
ker2, inject2 = kernel(h2)
print(f"  reduction Z -> Z/2 has kernel {ker2!r}, "
      f"inclusion = multiplication by {inject2.matrix[0][0]}")
print()

print("== Solving h(x) = target ==")
gx = FgAbGroup((4,))
doubling = GroupHom(gx, gx, [[2]])
print(f"  2x = 2 in Z/4: x = {solve(doubling, gx.element((2,))).coords}")
print(f"  2x = 1 in Z/4: {solve(doubling, gx.element((1,)))}   (no solution exists)")
mixed = GroupHom(FgAbGroup((0, 6)), FgAbGroup((12,)), [[4, 2]])
target = FgAbGroup((12,)).element((10,))
x = mixed(solve(mixed, target))
print(f"  a mixed Z + Z/6 -> Z/12 system: h(solution) = {x.coords} = target")
