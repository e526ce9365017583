from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; kernels fall back to numpy
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("specflow._kernels", ["src/specflow/_kernels.pyx"], extra_compile_args=["-O3", "-march=native", "-ffast-math"], define_macros=[("_GNU_SOURCE", None)], libraries=["mvec", "m"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
