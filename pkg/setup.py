"""Build script for the compiled chain kernel.

The extension is optional at runtime: subsetsim falls back to a pure-numpy
kernel when the compiled module is absent (see subsetsim._kernels).
"""

import os

import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

# libnpyrandom provides the C implementations behind numpy.random.Generator;
# linking against it keeps compiled and fallback draw sequences bit-identical.
_NPYRANDOM_LIB = os.path.join(np.get_include(), "..", "..", "random", "lib")

extensions = [
    Extension(
        "subsetsim._kernels._chain",
        ["src/subsetsim/_kernels/_chain.pyx"],
        include_dirs=[np.get_include()],
        library_dirs=[_NPYRANDOM_LIB],
        libraries=["npyrandom"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        # no FP contraction: the fallback kernel must match bit-for-bit
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
]

setup(ext_modules=cythonize(extensions, language_level=3))
