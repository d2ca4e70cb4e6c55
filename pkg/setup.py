import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("DIRCLUST_NO_EXTENSION"):
    try:
        import numpy
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "dirclust._kernels._speedups",
                    ["src/dirclust/_kernels/_speedups.pyx"],
                    include_dirs=[numpy.get_include()],
                    extra_compile_args=["-O3", "-fopenmp"],
                    extra_link_args=["-fopenmp"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            language_level=3,
        )
    except ImportError:
        # Pure-python fallback kernels are used when the extension is absent.
        ext_modules = []

setup(ext_modules=ext_modules)
