"""Geometry kernel backend selection.

The compiled extension is preferred; the pure-Python twin is used when the
extension is missing or when ``SKETCHPARTS_PURE=1`` is set.  Both expose
the same functions with bitwise-identical results, so everything above
this package is backend-agnostic.
"""

import os

from . import pure

try:
    from . import _native as native
except ImportError:
    native = None

if native is None or os.environ.get("SKETCHPARTS_PURE") == "1":
    active = pure
else:
    active = native

BACKEND = active.BACKEND_NAME

rasterize_polyline = active.rasterize_polyline
points_in_polygon = active.points_in_polygon
kd_order = active.kd_order
nearest_neighbors = active.nearest_neighbors


def backends():
    """Importable backends keyed by name (native only when compiled)."""
    available = {"pure": pure}
    if native is not None:
        available["native"] = native
    return available
