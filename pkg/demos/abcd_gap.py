# When is the matrix group just the product of its four diagonal and
# off-diagonal block subgroups?  A Klein x Klein pair where the quantifier
# over Q and R is satisfied but ABCD only reaches half the group.
from zappa_szep.central_aut import compute_PQRS, enumerate_Ac, verify_abcd_product
from zappa_szep.corpus import exhaustive_pairs

entry = [e for e in exhaustive_pairs(4) if e.name == "C2^2, C2^2 #11"][0]
mp = entry.mp
print("sigma rows:", mp.sigma.tolist())
print("tau rows:  ", mp.tau.tolist())

pq = compute_PQRS(mp)
print("\nsizes:", pq.sizes())

rep = verify_abcd_product(mp, strict=False)
print("1 - beta*gamma in P for all beta in Q, gamma in R:", rep.hypothesis_holds)
print(f"|ABCD| = {rep.abcd_order}, |A_c| = {rep.ac_order}")
print("a matrix ABCD misses:", rep.witness["missing_from_ABCD"])

# the beta that occurs there is not tau-invariant, so it is not in Q
betas = {tuple(m.beta.tolist()) for m in enumerate_Ac(mp)}
q = {tuple(b.tolist()) for b in pq.Q.members}
print("\nbeta entries in A_c:", sorted(betas))
print("of which in Q:      ", sorted(betas & q))
print("quantifying over those entries instead:", rep.entry_hypothesis_holds)
