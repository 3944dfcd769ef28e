import os

from setuptools import setup

# The compiled kernel is optional: without Cython or a C compiler the
# package installs pure-Python and shield._kernels falls back at import.
ext_modules = []
if os.environ.get("SHIELD_SKIP_EXT") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "shield._kernels._core",
                    ["src/shield/_kernels/_core.pyx"],
                    # -ffp-contract=off: the fallback kernel promises bitwise
                    # identical doubles, so FMA contraction must stay off.
                    extra_compile_args=["-O3", "-ffp-contract=off"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
