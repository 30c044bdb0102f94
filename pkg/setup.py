"""Build script for the optional compiled routing core.

The package works without the extension (a pure-Python implementation of the
same kernels is selected at import time), so the Cython build is skipped when
Cython is unavailable.
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
                "satroute._core_cy",
                ["src/satroute/_core_cy.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=extensions)
