"""Semantic-part importance analysis for sparsified freehand sketches.

The pipeline takes part-annotated vector sketches plus a declared stroke
subset per sketch (the sparsified representation) and produces per-category
part-importance distributions, text tables and word-cloud renderings.
"""

__version__ = "0.1.0"
