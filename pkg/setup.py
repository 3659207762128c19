from Cython.Build import cythonize
from setuptools import Extension, setup

setup(
    ext_modules=cythonize(
        [
            Extension(
                "alphacf._mckernel",
                ["src/alphacf/_mckernel.pyx"],
                optional=True,
            )
        ],
        language_level=3,
    )
)
