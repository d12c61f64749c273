import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("CRISPBISIM_PURE") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [Extension("crispbisim._kernel", ["src/crispbisim/_kernel.pyx"], language="c++",
                       extra_compile_args=["-O2", "-std=c++17"])],
            compiler_directives={"language_level": 3},
        )

setup(ext_modules=ext_modules)
