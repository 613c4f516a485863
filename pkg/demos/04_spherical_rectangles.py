"""
Rectangles on a spherical curve
===============================

On a curve that misses its antipodal image (diameter below pi) we can
place the four corners of a type-theta rectangle, for each theta.  The
search uses the rectangle flow: a pair (p1, p3) on the curve is rotated
about its midpoint by theta and we ask for the image pair to land on the
curve again.
"""

from pathlib import Path
import warnings

import numpy as np

from geoinscribe import HypothesisError, load_bundled, rectangle_search_sphere, render_svg
from geoinscribe.curvespec import fourier_curve

out = Path(__file__).with_name("output")
out.mkdir(exist_ok=True)

sc = load_bundled("spherical_latitude")
print(sc, f"antipodal clearance {sc.antipodal_clearance:.3f}")

for theta in (np.pi / 6, np.pi / 4, np.pi / 2, 3 * np.pi / 4):
    found = rectangle_search_sphere(sc, theta, n=256)
    sides = []
    for f in found[:1]:
        pts = sc(np.asarray(f.s))
        sides = np.arccos(np.clip(np.sum(pts * np.roll(pts, -1, 0), axis=1), -1, 1))
    print(f"theta = {theta:.4f}: {len(found)} rectangles; side lengths of the first",
          np.round(sides, 5))

render_svg(sc, rectangle_search_sphere(sc, np.pi / 2, n=256)[:1],
           out / "latitude_rectangle.svg")
print("wrote", out / "latitude_rectangle.svg")

# A curve reaching past the equator meets its antipodal image: the search refuses.
with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    big = fourier_curve("embedded-r3", np.pi / 2, cos=[0.0, 0.1], samples=512)
try:
    rectangle_search_sphere(big, np.pi / 2)
except HypothesisError as exc:
    print("large curve:", exc)
