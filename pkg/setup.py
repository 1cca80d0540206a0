from setuptools import setup, find_packages
import pathlib

here = pathlib.Path(__file__).parent.resolve()
long_description = (here / "README.md").read_text(encoding="utf-8")

setup(
    name="squeeze-flow",
    version="0.1.0",
    description="Capillary squeeze-flow simulator generating droplet-pattern / imprint-image datasets",
    long_description=long_description,
    long_description_content_type="text/markdown",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Physics",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
    ],
    keywords="squeeze flow, lubrication, volume of fluid, nanoimprint, dataset, inverse problem",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    package_data={"squeeze_flow": ["config/*.yaml"]},
    python_requires=">=3.9",
    install_requires=[
        "numpy>=1.22",
        "scipy>=1.12",
        "scikit-learn>=1.3",
        "python-dotenv>=0.19.0",
        "pyyaml>=5.4.0",
    ],
    extras_require={
        "test": ["pytest>=7.0"],
    },
    entry_points={
        "console_scripts": [
            "sqflow=squeeze_flow.cli:main",
        ],
    },
    include_package_data=True,
)
