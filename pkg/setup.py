"""Build the optional compiled step kernel.

The package works without it: ``c2o.interp`` falls back to the pure-Python
kernel when the extension is missing.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("C2O_PURE_PYTHON") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [Extension("c2o.interp._kernel", ["src/c2o/interp/_kernel.pyx"],
                       extra_compile_args=["-O3"], optional=True)],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
