"""Build hooks for the optional compiled scan kernels.

The package is pure Python plus one optional Cython extension holding the
quadratic pair-scan loops.  If Cython or a C compiler is unavailable the
build degrades to the numpy fallback in ``reachsmooth._accel._slow`` and
everything still works, only slower.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """build_ext that downgrades compiler failures to a warning."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing entirely
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(f"WARNING: compiled scan kernels skipped ({exc!r}); "
              "falling back to the pure-Python implementation")


def _extensions():
    if os.environ.get("REACHSMOOTH_NO_EXT") == "1":
        return []
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "reachsmooth._accel._fast",
        ["src/reachsmooth/_accel/_fast.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize([ext], language_level=3)


setup(ext_modules=_extensions(), cmdclass={"build_ext": OptionalBuildExt})
