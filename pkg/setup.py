import os

import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

# Build is optional: without a compiler the package falls back to numpy kernels.
extensions = [
    Extension(
        "sabeam.learn._cart",
        ["src/sabeam/learn/_cart.pyx"],
        include_dirs=[np.get_include()],
        # no -ffast-math: both backends must agree bit for bit
        extra_compile_args=["-O3", "-ffp-contract=off"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
]

if os.environ.get("SABEAM_NO_EXT"):
    extensions = []

setup(
    ext_modules=cythonize(extensions, compiler_directives={"language_level": "3"}),
)
