import sys

from setuptools import Extension, setup

# The compiled kernels are an optional speedup: if Cython or a C compiler is
# missing the install proceeds and sqcomp falls back to the numpy kernels.
ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "sqcomp._kernels",
                ["src/sqcomp/_kernels.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"sqcomp: skipping compiled kernels ({exc}); pure backend will be used",
          file=sys.stderr)

setup(ext_modules=ext_modules)
