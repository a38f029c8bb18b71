"""Build script for the optional compiled selection kernels.

The package is fully functional without the extension: keyrank.kernels
falls back to the pure numpy implementation when keyrank._kernels is not
importable, so a failed compile only costs speed, never correctness.
"""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


def _extensions():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        return []
    # -ffp-contract=off keeps the compiled gains bit-identical to the
    # numpy fallback (no fused multiply-add in rel - alpha * penalty).
    if sys.platform.startswith("win"):
        flags = ["/O2"]
    else:
        flags = ["-O3", "-ffp-contract=off"]
    ext = Extension(
        "keyrank._kernels",
        ["src/keyrank/_kernels.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=flags,
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


class optional_build_ext(build_ext):
    """Degrade to the pure-Python fallback when compilation fails."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, broken toolchain, ...
            print(f"WARNING: compiled kernels skipped ({exc}); "
                  "using the pure-Python fallback", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"WARNING: building {ext.name} failed ({exc}); "
                  "using the pure-Python fallback", file=sys.stderr)


setup(
    ext_modules=_extensions(),
    cmdclass={"build_ext": optional_build_ext},
)
