# Builds the optional compiled kernels. The package works without them:
# urllc_hma.kernels falls back to the pure-Python implementations.
import os

from setuptools import setup

ext_modules = []
if os.environ.get("URLLC_HMA_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "urllc_hma._ckernels",
                    ["src/urllc_hma/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
