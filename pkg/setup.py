"""Build script for the optional compiled training kernel.

The package works without the extension: srcmine.kernels falls back to the
pure-Python kernel when the compiled module is absent.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
except ImportError:
    pass
else:
    ext_modules = cythonize(
        [
            Extension(
                "srcmine.kernels._speedups",
                ["src/srcmine/kernels/_speedups.pyx"],
                include_dirs=[numpy.get_include()],
                optional=True,
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
