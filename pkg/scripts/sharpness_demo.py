"""Equality cases of the s-convex and fractional bounds.

x**s attains the s-convex upper bound for every s; the identity function
attains the fractional bound (carried through its derivation) for every
order alpha when s = 1.
"""

from fracineq import PROOF_CONSISTENT, sharpness_search

S_GRID = [0.1, 0.25, 0.5, 0.75, 0.9, 1.0]
ALPHA_GRID = [0.25, 0.5, 1.0, 2.0, 3.0]


def show(rec):
    print(f"{rec.theorem_id} [{rec.variant}] family {rec.family}")
    for pt in rec.points:
        params = ", ".join(f"{k}={v:g}" for k, v in pt["params"].items())
        print(f"  {params:<16} rhs margin {pt['margin']: .3e}")


if __name__ == "__main__":
    show(sharpness_search("e13", "power:s", {"s": S_GRID}))
    show(sharpness_search("T1", "power:1", {"alpha": ALPHA_GRID}, fixed={"s": 1.0}, variant=PROOF_CONSISTENT))
    # the printed form of the same bound falls below the mean once alpha > 1
    show(sharpness_search("T1", "power:1", {"alpha": ALPHA_GRID}, fixed={"s": 1.0}, variant="as-stated"))
