from setuptools import Extension, setup
from Cython.Build import cythonize

# -ffp-contract=off: no fused multiply-add, so the compiled kernels round
# exactly like the numpy fallback and results are backend-independent.
setup(
    ext_modules=cythonize(
        [
            Extension(
                "corrwalk._kernels",
                ["src/corrwalk/_kernels.pyx"],
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        language_level=3,
    ),
)
