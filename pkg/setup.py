"""Build script: compiles the kernel extension when Cython is available.

The package is fully functional without the extension (the pure-Python
kernels are selected at import); set MINFLOW_NO_EXT=1 to skip the build
explicitly.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("MINFLOW_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
        ext_modules = cythonize(
            ["src/minflow/kernels/_speedups.pyx"],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
