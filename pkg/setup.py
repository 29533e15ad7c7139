"""Build the optional compiled kernels.

The package is fully functional without them (a pure-Python fallback is
selected at import); any failure to cythonize or compile just skips the
extension.
"""

import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Never make the install fail because the extension would not build."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"warning: skipping compiled kernels: {exc}", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(
                f"warning: compiled kernels unavailable ({exc}); "
                "the pure-Python backend will be used",
                file=sys.stderr,
            )


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("warning: Cython not found; building without compiled kernels",
              file=sys.stderr)
        return []
    return cythonize(
        ["src/minclue/_kernels.pyx"],
        compiler_directives={"language_level": "3"},
    )


setup(
    ext_modules=extensions(),
    cmdclass={"build_ext": OptionalBuildExt},
)
