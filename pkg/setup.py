"""Build script: compiles the optional speedup extension when Cython and a C
compiler are available; the package falls back to pure Python otherwise."""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler: not fatal
            self._skip(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._skip(exc)

    @staticmethod
    def _skip(exc):
        print(f"NOTE: compiled kernels skipped ({exc}); pure-Python fallback will be used")


def extensions():
    pyx = os.path.join("src", "d2dpa", "_speedups.pyx")
    gen_c = os.path.join("src", "d2dpa", "_speedups.c")
    try:
        from Cython.Build import cythonize

        return cythonize([Extension("d2dpa._speedups", [pyx])])
    except ImportError:
        if os.path.exists(gen_c):
            return [Extension("d2dpa._speedups", [gen_c])]
        print("NOTE: Cython not available; building without compiled kernels")
        return []


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
