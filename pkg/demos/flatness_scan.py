"""How flat is a field at each location and scale?

The beta number of a ball measures the normalized L^q distance from the
field to its best horizontally affine approximation on that ball.  This
scan shows the three behaviours that drive everything downstream: affine
fields are annihilated at machine precision, smooth fields flatten like
r^2 as balls shrink, and the whole profile commutes with dilations.
"""

import numpy as np

from heisbeta.beta import beta_number, beta_profile, check_monotonicity
from heisbeta.fields import catalog, precompose_dilation
from heisbeta.hgroup import dilate
from heisbeta.quad import QuadSpec, ScaleGrid

GRID = QuadSpec(mode="grid")


def main():
    # ------------------------------------------------------------------
    # A horizontally affine field b + <a, z> is its own best fit at every
    # location and scale, so its beta numbers vanish (up to roundoff).
    aff = catalog("affine", a=[1.3, -0.6], b=0.4)
    x = np.array([0.5, -0.2, 0.8])
    for r in (0.1, 1.0, 10.0):
        val, _ = beta_number(aff, x, r, 1, 1.0, GRID)
        print(f"affine field: beta(B(x, {r:5.1f})) = {val:.3e}")
    print()

    # ------------------------------------------------------------------
    # A gaussian bump is curved at unit scale and flat at small scales;
    # its beta profile decays quadratically as r -> 0.
    f = catalog("gaussian")
    grid = ScaleGrid(1e-2, 1e1, 4)
    prof = beta_profile(f, np.zeros(3), 1, 1.0, grid, GRID)
    print("gaussian beta profile at the origin (q = 1):")
    print("        r        beta      beta / r^2")
    for r, val in zip(grid.nodes(), prof.values):
        print(f"  {r:9.4f}  {val:.3e}  {val / r**2:10.4f}")
    print()

    # ------------------------------------------------------------------
    # Dilation covariance: precomposing the field with delta_s and
    # shrinking the ball by s reproduces the original beta number.  With
    # a deterministic grid the ratio is exact to machine precision.
    s = 2.0
    lhs, _ = beta_number(precompose_dilation(f, s), x, 0.5, 1, 1.0, GRID)
    rhs, _ = beta_number(f, dilate(s, x), s * 0.5, 1, 1.0, GRID)
    print(f"covariance ratio beta(f o delta_s) / beta(f) = {lhs / rhs:.12f}")

    # ------------------------------------------------------------------
    # Monotonicity with the doubling convention: the beta number of a
    # contained ball is controlled by the containing ball's beta up to
    # the volume factor (R / r)^(Q / q).  The checker returns the raw
    # ratio beta(inner) / beta(outer).
    ratio = check_monotonicity(f, (np.zeros(3), 0.5), (np.zeros(3), 1.0), 1.0, GRID)
    bound = 2.0 * (1.0 / 0.5) ** 4.0
    print(f"monotonicity: beta(inner) / beta(outer) = {ratio:.4f}"
          f"   volume bound 2 (R/r)^(Q/q) = {bound:.1f}")


if __name__ == "__main__":
    main()
