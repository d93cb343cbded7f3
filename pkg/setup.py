from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; rescalc.perm falls back at import
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("rescalc._perm_ext", ["src/rescalc/_perm_ext.pyx"], optional=True)],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
