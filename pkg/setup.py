"""Build the optional compiled kernel extension.

The package works without it (a pure numpy fallback is selected at import),
so a failed extension build should not block installation; remove the
extension module and reinstall if a toolchain is unavailable.
"""

import numpy
from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [
    Extension(
        "dglclass._kernels",
        ["src/dglclass/_kernels.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
]

setup(ext_modules=cythonize(extensions, language_level=3))
