"""Build script: compiles the optional search kernel extension.

The package is fully functional without the extension; any failure here
(missing Cython, missing compiler) downgrades to the pure Python kernel.
"""

import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001 - any build failure is non-fatal
            print(f"skipping compiled kernel: {exc}", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            print(f"skipping compiled kernel {ext.name}: {exc}", file=sys.stderr)


def extensions():
    import os

    if not os.path.exists("src/hmbp/_search_fast.pyx"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    return cythonize(
        ["src/hmbp/_search_fast.pyx"],
        compiler_directives={"language_level": "3"},
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
