"""Build script: compiles the optional Cython kernel extension.

The package works without the extension (a numpy fallback is selected at
import time), so any failure here degrades to a pure-Python build instead
of aborting the install.
"""
import sys

from setuptools import setup

ext_modules = []
try:
    import numpy
    from setuptools import Extension
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "ringchain._kernels",
                ["src/ringchain/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # missing compiler / cython: fall back to pure python
    print(f"ringchain: skipping compiled kernels ({exc!r})", file=sys.stderr)

setup(ext_modules=ext_modules)
