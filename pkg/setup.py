import os

from setuptools import setup

ext_modules = []
if os.environ.get("IWASAWA_LAB_PURE", "") not in ("1", "true", "yes"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/iwasawa_lab/_forms.pyx"],
            compiler_directives={"language_level": "3"},
            quiet=True,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
