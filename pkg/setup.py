import numpy
from setuptools import Extension, setup

# The compiled kernels are optional: if Cython (or a C compiler) is missing
# the package falls back to the pure numpy implementations at import time.
try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "reliefopt._kernels._native",
                ["src/reliefopt/_kernels/_native.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
