"""Build script: compiles the optional Cython scan kernel when possible.

The package works without the extension (a pure-Python kernel is selected
at import time); the compiled kernel only speeds up the large prime scans.
Set ABCLOSURE_NO_EXT=1 to skip the extension build entirely.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("ABCLOSURE_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("abclosure._kernels_cy", ["src/abclosure/_kernels_cy.pyx"])],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
