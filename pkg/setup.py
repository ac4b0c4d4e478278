"""Build hooks for the optional compiled kernels.

The package works without the extension (a numpy fallback is selected at
import time); set PAMPER_NO_EXT=1 to skip compilation entirely.
"""
import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("PAMPER_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "pamper._kernels._ct",
                    sources=["src/pamper/_kernels/_ct.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
