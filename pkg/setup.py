import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [
    Extension(
        "boussinesq_dei._ckernels",
        ["src/boussinesq_dei/_ckernels.pyx"],
        include_dirs=[np.get_include()],
        # plain (ac - bd, ad + bc) products: without this every complex multiply
        # is a libgcc __muldc3 call with Inf/NaN recovery, slower than numpy
        extra_compile_args=["-O3", "-fcx-limited-range"],
    )
]

setup(ext_modules=cythonize(extensions, compiler_directives={"language_level": "3"}))
