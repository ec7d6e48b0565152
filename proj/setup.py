from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

ext = Pybind11Extension(
    "cpcsim._cpcsim",
    sources=[
        "bindings/module.cpp",
        "src/rng.cpp",
        "src/distribution.cpp",
        "src/order_stats.cpp",
        "src/monte_carlo.cpp",
        "src/racer.cpp",
    ],
    include_dirs=["include"],
    cxx_std=20,
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
