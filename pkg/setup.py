import pathlib

from setuptools import find_packages, setup

BASE_DIR = pathlib.Path(__file__).resolve().parent


def parse_requirements(name: str = "requirements.txt"):
    with open(BASE_DIR / name) as f:
        return [line for line in f.read().splitlines() if line and not line.startswith("#")]


with open(BASE_DIR / "README.md", encoding="utf-8") as f:
    long_description = f.read()


setup(
    name="clustest",
    version="0.1.0",
    description="Split-sample tests for multiple clusters in panel data",
    long_description=long_description,
    long_description_content_type="text/markdown",
    keywords="k-means clustering hypothesis-test panel-data monte-carlo",
    license="MIT License",
    packages=find_packages(exclude=("tests", "tests.*")),
    include_package_data=True,
    package_data={
        "clustest": ["py.typed"],
    },
    python_requires=">=3.9.0",
    install_requires=parse_requirements(),
    extras_require={
        "test": ["pytest>=7.0", "hypothesis>=6.0"],
        "docs": ["sphinx", "pydata-sphinx-theme", "sphinx-copybutton"],
    },
    entry_points={
        "console_scripts": ["clustest=clustest.cli:main"],
    },
    classifiers=[
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
)
