import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

# Without Cython the package still installs; the numpy kernel backend is
# picked up at import time instead.
ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "charax._kernels._compiled",
                ["src/charax/_kernels/_compiled.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
