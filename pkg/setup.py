"""Build script; compiles the Cython kernel extension when Cython is available.

The package stays fully functional without the extension: spheregap._kernels
falls back to the vectorized numpy implementations at import time.
"""
from setuptools import Extension, setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "spheregap._kernels_cy",
                sources=["src/spheregap/_kernels_cy.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
