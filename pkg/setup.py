"""Build script for the optional compiled quadrature kernel.

The package is fully functional without the extension (a NumPy fallback
is selected at import time), so any failure here only costs speed: the
Cython step and the C compile are both best-effort.
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Skip the extension, loudly, when the toolchain cannot build it."""

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # compiler missing, bad flags, ...
            print(f"WARNING: building {ext.name} failed ({exc}); "
                  "falling back to the pure-NumPy kernel", file=sys.stderr)


extensions = []
try:
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "spdcsim._kernels",
                ["src/spdcsim/_kernels.pyx"],
                extra_compile_args=["-O3", "-ffast-math", "-march=native"],
                extra_link_args=["-lmvec", "-lm"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:
    print(f"WARNING: Cython step skipped ({exc}); "
          "falling back to the pure-NumPy kernel", file=sys.stderr)

setup(ext_modules=extensions, cmdclass={"build_ext": OptionalBuildExt})
