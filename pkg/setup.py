from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [
    Extension(
        "specquant._ckernels",
        ["src/specquant/_ckernels.pyx"],
        # operands stay O(1), so the inf/nan-safe complex multiply helpers are not needed
        extra_compile_args=["-O3", "-fcx-limited-range"],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    )
)
