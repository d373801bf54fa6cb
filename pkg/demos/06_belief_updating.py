"""
Pooling evidence with Dempster-Shafer belief functions
======================================================

Unlike a Bayesian posterior, a mass function can commit weight to a SET of
possibilities without dividing it among the members, so "I don't know" is
representable. Belief (mass provably inside a hypothesis) and plausibility
(mass not provably outside) bracket each hypothesis, and Dempster's rule
pools independent witnesses by multiplying masses over intersections.
"""

from layerstack import Frame, belief, combine, keyword_belief_update, make_mass, plausibility, vacuous_mass

frame = Frame(("rust", "wear", "defect"))

# Witness 1 is 60% sure it's rust but otherwise uncommitted; witness 2
# only narrows things down to a corrosion-related cause.
w1 = make_mass(frame, {("rust",): 0.6, ("rust", "wear", "defect"): 0.4})
w2 = make_mass(frame, {("rust", "wear"): 0.7, ("rust", "wear", "defect"): 0.3})

pooled = combine(w1, w2)
print("pooled focal elements:")
for mask, value in pooled.masses.items():
    print(f"  {{{', '.join(frame.names(mask))}}}: {value:.4f}")

# Belief <= plausibility for every hypothesis; the gap is unresolved
# ignorance that a Bayesian point probability would have to invent.
for hypo in (("rust",), ("wear",), ("rust", "wear")):
    b, p = belief(pooled, hypo), plausibility(pooled, hypo)
    print(f"  Bel({'+'.join(hypo)}) = {b:.4f}   Pl = {p:.4f}   gap {p - b:.4f}")

# Combining with total ignorance changes nothing: the vacuous mass is the
# identity element of Dempster's rule.
assert combine(pooled, vacuous_mass(frame)).masses == pooled.masses
print("\ncombining with the vacuous mass: unchanged (identity)")

# The pipeline's last layer does the same thing over keywords: per-round
# support scores become simple-support masses and are folded into a prior.
keywords = Frame(("model", "entropy", "cluster"))
prior = vacuous_mass(keywords)
posterior = keyword_belief_update(prior, {"model": 0.5, "entropy": 0.3})
print("\nkeyword posterior after one evidence round:")
for name in keywords.elements:
    print(f"  {name:<8} Bel {belief(posterior, (name,)):.4f}   Pl {plausibility(posterior, (name,)):.4f}")
