"""Build script: compiles the optional Cython coincidence kernel.

The package is fully functional without the extension (a NumPy fallback is
selected at import time), so a missing compiler or Cython only costs speed.
"""
import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("ENTNET_SKIP_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "entnet._kernels",
                    ["src/entnet/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        print("entnet: Cython/NumPy unavailable at build time; "
              "installing with the pure-Python kernel only.")

setup(ext_modules=ext_modules)
