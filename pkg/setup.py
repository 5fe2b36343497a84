"""Build script for the optional compiled kernels.

The package works without the extension (a pure-Python implementation is
selected at import time), so any compile failure only costs speed: the
build_ext subclass downgrades errors to a warning and the install proceeds.
"""

import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(
            f"boxpush: compiled kernels unavailable, using the pure-Python "
            f"fallback ({exc})",
            file=sys.stderr,
        )


try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    extensions = cythonize(
        [
            Extension(
                "boxpush._kernels._fastloops",
                ["src/boxpush/_kernels/_fastloops.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError as exc:
    print(f"boxpush: skipping compiled kernels ({exc})", file=sys.stderr)
    extensions = []

setup(ext_modules=extensions, cmdclass={"build_ext": optional_build_ext})
