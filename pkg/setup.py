from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # the numpy fallback keeps the package usable
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("permsum._kernels", ["src/permsum/_kernels.pyx"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
