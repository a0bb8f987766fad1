"""Build script for the optional compiled kernels.

The package is pure Python plus one Cython extension holding the hot loops
(grid evaluation of phase-space forms, quadrature sums).  If Cython or a C
compiler is unavailable the extension is skipped and the numpy fallback is
used at runtime.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext = Extension(
        "wigfree._ckernels",
        ["src/wigfree/_ckernels.pyx"],
        extra_compile_args=["-O3"],
        optional=True,  # fall back to the numpy kernels if the compile fails
    )
    ext_modules = cythonize([ext], language_level="3")

setup(ext_modules=ext_modules)
