import glob

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

sources = ["python/module.cpp"] + sorted(glob.glob("src/*.cpp"))

ext = Pybind11Extension(
    "signedcoulomb._core",
    sources,
    include_dirs=["include", "vendor"],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
