"""Build script: compiles the triple-scan kernel when a C toolchain is present.

The extension is optional: if Cython or a compiler is unavailable the install
still succeeds and the package transparently falls back to the vectorized
numpy scan (see linecluster.hypergraph). The kernel is compiled without
-ffast-math and with FP contraction disabled so compiled scores are
bit-identical to the numpy fallback.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext = Extension(
        "linecluster._scan",
        ["src/linecluster/_scan.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3", "-ffp-contract=off"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    ext.optional = True  # build failure degrades to the numpy backend
    ext_modules = cythonize([ext], compiler_directives={"language_level": "3"})
except ImportError:
    pass

setup(ext_modules=ext_modules)
