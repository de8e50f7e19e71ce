"""Build script for the optional compiled kernel module.

The package works without the extension (a pure-Python twin is selected at
import time); set EXTDICKE_NO_EXT=1 to skip compilation entirely.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("EXTDICKE_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "extdicke._kernels",
                    ["src/extdicke/_kernels.pyx"],
                    extra_compile_args=["-O2"],
                )
            ],
            language_level="3",
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
