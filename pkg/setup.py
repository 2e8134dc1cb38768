"""Build script for the optional compiled contraction kernel.

The package works without the extension (a pure-numpy backend is selected
at import time); building it just makes decoding a lot faster.
"""
import numpy
from setuptools import Extension, setup
from Cython.Build import cythonize

extensions = [
    Extension(
        "qeclab._contract",
        ["src/qeclab/_contract.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3"],
        optional=True,
    )
]

setup(
    ext_modules=cythonize(extensions, compiler_directives={"language_level": 3}),
)
