"""Build the optional compiled kernel; the package works without it."""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [Extension("tiltlab._kernel", ["src/tiltlab/_kernel.pyx"])],
        language_level="3",
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"tiltlab: building without the compiled kernel ({exc})")

setup(ext_modules=ext_modules)
