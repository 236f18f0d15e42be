import os
import sys

import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

if sys.platform.startswith("win"):
    omp_compile, omp_link = ["/openmp"], []
else:
    omp_compile, omp_link = ["-fopenmp"], ["-fopenmp"]

if os.environ.get("QALS_NO_OPENMP"):
    omp_compile, omp_link = [], []

ext = Extension(
    "qals._kernels",
    ["src/qals/_kernels.pyx"],
    include_dirs=[np.get_include()],
    extra_compile_args=["-O2", *omp_compile],
    extra_link_args=omp_link,
    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
)

setup(ext_modules=cythonize([ext], compiler_directives={"language_level": "3"}))
