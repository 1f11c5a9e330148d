import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

# The compiled kernels are an optional speedup; qrhull falls back to the
# numpy implementations when the extension is unavailable.
extensions = [
    Extension(
        "qrhull._native",
        ["src/qrhull/_native.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3"],
        optional=True,
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    )
)
