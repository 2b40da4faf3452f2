import numpy as np
from setuptools import Extension, setup

# The compiled kernel is optional: the package falls back to the NumPy
# implementation at import time if the extension is missing.
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "vortex_atlas._mulkernel",
                ["src/vortex_atlas/_mulkernel.pyx"],
                include_dirs=[np.get_include()],
            )
        ],
        language_level="3",
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
