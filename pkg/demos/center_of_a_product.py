# The center of a product read off from the two actions, against the brute
# force answer, over every matched pair on groups of order at most 4.
from collections import Counter

from zappa_szep.center import center_via_theorem
from zappa_szep.corpus import exhaustive_pairs
from zappa_szep.groups import center_bruteforce
from zappa_szep.matched_pair import build_external_product, fix_ker_sets

sizes = Counter()
for entry in exhaustive_pairs(4):
    zs = build_external_product(entry.mp)
    Z = center_via_theorem(entry.mp, zs)
    assert Z.members == center_bruteforce(zs.product).members, entry.name
    sizes[(zs.product.order, Z.order)] += 1

print("(|G|, |Z(G)|) -> number of matched pairs")
for key in sorted(sizes):
    print(f"  {key}: {sizes[key]}")

# a case with both actions nontrivial
entry = [e for e in exhaustive_pairs(4) if e.name == "C2^2, C2^2 #11"][0]
fk = fix_ker_sets(entry.mp)
print("\n", entry.name)
print("  Fix(sigma) =", fk.fix_sigma.members, " ker(sigma) =", fk.ker_sigma.members)
print("  Fix(tau)   =", fk.fix_tau.members, " ker(tau)   =", fk.ker_tau.members)
print("  H* =", fk.H_star.members, " K* =", fk.K_star.members)
