import os
from setuptools import setup


this_directory = os.path.abspath(os.path.dirname(__file__))
with open(os.path.join(this_directory, "README.md"), "r") as f:
    long_description = f.read()


setup(
    name="simplexdff",
    packages=["simplexdff"],
    package_data={"simplexdff": ["data/*.csv"]},
    version="0.1.0",
    license="MIT",
    description="Graph classification with diffusion Frechet functions on simplicial complexes.",
    long_description=long_description,
    long_description_content_type="text/markdown",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.8",
    install_requires=["joblib>=1.0", "numpy>=1.17", "scipy>=1.4"],
    entry_points={"console_scripts": ["simplexdff = simplexdff.cli:main"]},
    zip_safe=False,
)
