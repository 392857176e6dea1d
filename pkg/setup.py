"""Build script; the Cython kernel is optional.

`pip install .` or `python setup.py build_ext --inplace` compiles
germlab._kernel_c when Cython and a C compiler are present; otherwise the
package falls back to the pure-Python kernel at import time.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/germlab/_kernel_c.pyx"],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
