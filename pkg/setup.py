"""Build hook for the optional compiled kernel extension.

The package is fully functional without the extension (a pure numpy
fallback is selected at import time), so a missing compiler or Cython
must not break installation.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    ext_modules = cythonize(
        [
            Extension(
                "geodint.kernels._mlp_ext",
                sources=["src/geodint/kernels/_mlp_ext.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    import sys

    print(f"geodint: skipping compiled kernels ({exc}); pure backend will be used",
          file=sys.stderr)

setup(ext_modules=ext_modules)
