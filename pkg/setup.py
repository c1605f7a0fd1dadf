from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; _kernels falls back to _pure
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("vsscontrol._core", ["src/vsscontrol/_core.pyx"], optional=True)],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
