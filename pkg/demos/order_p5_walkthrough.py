# Walk through the order 3^5 group: its center, its central automorphisms,
# and the four block subgroups of the matrix group.
import numpy as np

from zappa_szep import build_p5
from zappa_szep.center import center_via_theorem
from zappa_szep.central_aut import compute_PQRS, decompose_images, enumerate_Ac_stack, stack_structure, unstack
from zappa_szep.groups import center_bruteforce
from zappa_szep.homs import central_automorphism_images

inst = build_p5(3)
G = inst.zs.product
print(f"|G| = {G.order}, abelian: {G.is_abelian}")

# c and d should generate the center
names = {inst.in_G(n): n for n in "abcde"}
Z = center_via_theorem(inst.mp, inst.zs)
print("center from the actions:", Z.order, "elements")
print("same as brute force:", Z.members == center_bruteforce(G).members)
print("generators inside it:", sorted(names[g] for g in names if g in set(Z.members)))

thetas = central_automorphism_images(G)
ac = enumerate_Ac_stack(inst.mp)
print(f"\ncentral automorphisms (brute force): {len(thetas)}")
print(f"matrices satisfying the conditions:   {ac[0].shape[0]}")
probe = stack_structure(inst.mp, ac)
print("abelian invariants of the matrix group:", probe.abelian_invariants)

# one automorphism in matrix form: which one fixes everything but a?
dec = decompose_images(thetas, inst.zs)
for m in unstack(dec, inst.mp):
    moved = [n for n in "abd" if m.alpha[inst.labels[n]] != inst.labels[n]]
    if moved == ["a"] and not m.beta.any() and not m.gamma.any() and (m.delta == np.arange(9)).all():
        print("\nalpha only moves a:", "a ->", m.alpha[inst.labels["a"]], "(a*d is", inst.H_word(1, 0, 1), ")")
        break

pq = compute_PQRS(inst.mp)
print("\n|P|, |Q|, |R|, |S| =", [len(x) for x in (pq.P, pq.Q, pq.R, pq.S)])
