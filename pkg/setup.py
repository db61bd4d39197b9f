"""Build shim for the optional compiled kernels.

The package is pure python plus one Cython extension holding the
heavy-tail numeric kernels.  The extension is best-effort: if Cython or
a C compiler is missing the build logs a notice and the package falls
back to the numpy kernels at import time.
"""

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Carry on without the extension when the toolchain is absent."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # no compiler, no Cython
            print(f"npswatch: skipping compiled kernels ({exc!r})")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"npswatch: skipping {ext.name} ({exc!r})")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    from setuptools import Extension

    return cythonize(
        [
            Extension(
                "npswatch.heavytail._core",
                ["src/npswatch/heavytail/_core.pyx"],
            )
        ],
        language_level=3,
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
