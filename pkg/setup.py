"""Build script: compiles the optional CSR kernel extension.

The package works without the extension (a numpy fallback is selected at
import time), so any failure to cythonize or compile is non-fatal.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "lsclust.kernels._csr",
                ["src/lsclust/kernels/_csr.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "initializedcheck": False,
            "cdivision": True,
        },
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
