"""Build hook for the optional compiled kernel extension.

The package is fully functional without the extension (a pure-Python
fallback is selected at import time); the Extension is marked optional so
installation succeeds on hosts without Cython or a C compiler.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "deadend._kernels",
                ["src/deadend/_kernels.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
