"""Builds the optional compiled stepping kernel.

The package is fully functional without the extension (a pure-Python
kernel is selected at import time); the build is therefore marked
optional so that a missing compiler degrades to a warning.

-ffp-contract=off keeps the compiled kernel bit-identical to the
pure-Python one: no FMA contraction, strict IEEE double semantics.
"""

import warnings

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extensions = [
    Extension(
        "hogcycle._kernel",
        ["src/hogcycle/_kernel.pyx"],
        extra_compile_args=["-O3", "-ffp-contract=off", "-fno-fast-math"],
        optional=True,
    )
]

if cythonize is not None:
    ext_modules = cythonize(extensions, compiler_directives={"language_level": "3"})
else:
    warnings.warn("Cython not available: installing with the pure-Python kernel only")
    ext_modules = []

setup(ext_modules=ext_modules)
