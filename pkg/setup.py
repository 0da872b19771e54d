"""Build script: compiles the optional native kernel extension.

The package works without the extension (a pure-numpy fallback is selected
at import time), so a failed compile only costs speed, not functionality.
Set VIDMARK_PURE_PYTHON=1 to skip the extension build entirely.
"""

import os
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Degrade to the pure-Python install when the C toolchain is broken."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001 - any build failure is non-fatal
            sys.stderr.write(f"vidmark: native kernel build skipped: {exc}\n")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            sys.stderr.write(f"vidmark: building {ext.name} failed: {exc}\n")


def extensions():
    if os.environ.get("VIDMARK_PURE_PYTHON"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    # -ffp-contract=off keeps the lifting arithmetic bit-identical to the
    # numpy fallback (no FMA contraction), which the parity tests rely on.
    flags = [] if sys.platform == "win32" else ["-O3", "-ffp-contract=off"]
    ext = Extension(
        "vidmark._kernels._native",
        sources=["src/vidmark/_kernels/_native.pyx"],
        extra_compile_args=flags,
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
