"""Build the optional compiled kernel.

The package works without it (a vectorized numpy fallback is selected at
import); compile in place for the fast path:

    python setup.py build_ext --inplace
"""

from setuptools import setup

try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/ppkitaev/_core/_gamma_cy.pyx",
        compiler_directives={"language_level": 3},
    )
    include_dirs = [numpy.get_include()]
except ImportError:
    ext_modules = []
    include_dirs = []

setup(ext_modules=ext_modules, include_dirs=include_dirs)
