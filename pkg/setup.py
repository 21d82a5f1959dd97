import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None and not os.environ.get("TOKGAP_PURE"):
    extension = Extension(
        "tokgap._kernels",
        ["src/tokgap/_kernels.pyx"],
        optional=True,  # pure-Python fallback takes over if the build fails
    )
    ext_modules = cythonize(
        [extension], compiler_directives={"language_level": "3"}
    )

setup(ext_modules=ext_modules)
