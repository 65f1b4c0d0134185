"""Lazy random walks on the free group, and coincidence rates of random tilings.

A step stays put with probability 1 - 4s and moves along a, b, a^-1 or b^-1
with probability s each. The return probability decays like
(1 - s(4 - sqrt 13))^t. This is what makes two independent random tilings
unlikely to have the same image in the free group.
"""

from fractions import Fraction

from cyltile import walks as W
from cyltile.board import rectangle

print("closed paths gamma(n):", [W.gamma(n) for n in range(8)])
s = Fraction(1, 9)
for t in (2, 4, 8, 12):
    p = W.return_probability(t, s)
    bound = float((1 - s * (4 - 13**0.5)) ** t)
    print(f"P(0,{t}) = {float(p):.6f}  <= {bound:.6f}: {W.decay_holds(p, t, s)}")

print("\nthe first words:", ["e" if w == "" else w for w in W.first_words(12)])
print("profile of the first 5 words:", W.compress(W.symbolic_profile(W.first_words(5))))

print("\ncoincidence rates for 500 pairs of random tilings of the 3x2 rectangle (seed 1):")
rows = W.theorem1_experiment(rectangle(3, 2), [2, 4, 6], 500, seed=1)
print(W.rows_to_csv(rows))
