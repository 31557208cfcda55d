import sys

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

# optional=True: a failed compile leaves the pure-Python kernels in charge
extensions = [
    Extension(
        "perfect_sim._ising_kernels",
        ["src/perfect_sim/_ising_kernels.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3"],
        optional=True,
    )
]

ext_modules = []
if cythonize is not None:
    try:
        ext_modules = cythonize(extensions, compiler_directives={"language_level": "3"})
    except Exception as exc:  # Cython translation error
        print(f"warning: skipping compiled kernels: {exc}", file=sys.stderr)

setup(ext_modules=ext_modules)
