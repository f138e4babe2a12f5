"""Build script: compiles the optional Cython kernel extension.

The package works without the extension (a pure NumPy/Python fallback is
selected at import); set COCIMAP_NO_EXT=1 to skip compilation explicitly.
"""

import os
import sys

from setuptools import setup

ext_modules = []
if not os.environ.get("COCIMAP_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "cocimap._kernels._core",
                    ["src/cocimap/_kernels/_core.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level="3",
        )
    except Exception as exc:  # pragma: no cover - build-env dependent
        sys.stderr.write(f"cocimap: building without compiled kernels ({exc})\n")

setup(ext_modules=ext_modules)
