"""Build script: compiles the optional Cython kernel core.

The package is fully functional without the extension (a pure-Python
fallback is selected at import time); the compiled core is what makes
large fuzzing campaigns fast.  If Cython or a C compiler is missing we
install the pure-Python package and move on.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "mechlab._kernels._core",
                ["src/mechlab/_kernels/_core.pyx"],
            )
        ],
        language_level="3",
        compiler_directives={
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
