"""Build script: compiles the optional rewrite-kernel extension.

The package is pure Python by default.  When Cython and a C compiler are
available, the hot reduction kernel is additionally built as a compiled
extension (qonsager._kernel_cy); the reducer picks it up at import time and
falls back to the pure-Python twin otherwise.  Set QONSAGER_NO_EXT=1 to skip
the extension build entirely.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("QONSAGER_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("qonsager._kernel_cy", ["src/qonsager/_kernel_cy.pyx"])],
            language_level=3,
        )
    except ImportError:
        # No Cython: install as pure Python.
        ext_modules = []

setup(ext_modules=ext_modules)
