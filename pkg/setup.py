"""Build script for the compiled geometry kernels.

The extension is optional: if Cython or a C compiler is unavailable the
package falls back to the pure-Python kernels in sketchparts.kernels.pure.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extensions = []
if cythonize is not None:
    extensions = cythonize(
        [
            Extension(
                "sketchparts.kernels._native",
                sources=["src/sketchparts/kernels/_native.pyx"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=extensions)
