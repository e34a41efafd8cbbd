"""Build script: compiles the optional RK4 kernel extension.

If no C toolchain (or Cython) is available the install still succeeds;
the package then selects the pure-Python kernel at import time.
"""

import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


def _extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("ptfisher: Cython not available, skipping compiled kernel",
              file=sys.stderr)
        return []
    from setuptools import Extension

    ext = Extension(
        "ptfisher._rk4",
        ["src/ptfisher/_rk4.pyx"],
        # -ffp-contract=off keeps the compiled kernel bit-compatible with
        # the pure-Python twin (no FMA contraction of complex products).
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
    return cythonize([ext], language_level=3)


class optional_build_ext(build_ext):
    """Degrade to a pure-Python install when compilation fails."""

    def run(self):
        try:
            super().run()
        except Exception as exc:
            print(f"ptfisher: compiled kernel build failed ({exc}); "
                  "falling back to pure Python", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"ptfisher: building {ext.name} failed ({exc}); "
                  "falling back to pure Python", file=sys.stderr)


setup(ext_modules=_extensions(), cmdclass={"build_ext": optional_build_ext})
