import os

import numpy as np
from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("UNITRANS_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "unitrans._ckernels",
                    ["src/unitrans/_ckernels.pyx"],
                    include_dirs=[np.get_include(), "src/unitrans"],
                    language="c++",
                    extra_compile_args=["-O3", "-std=c++17", "-ffp-contract=off"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
