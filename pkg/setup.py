"""Setup module for momax."""

from setuptools import find_packages, setup

VERSION = "0.1.0"


def readme():
    """Print long description."""
    with open("README.md") as f:
        return f.read()


setup(
    name="momax",
    version=VERSION,
    description="LP greedy and baselines for multiobjective submodular maximization",
    long_description=readme(),
    long_description_content_type="text/markdown",
    license="Apache License Version 2.0",
    keywords="submodular maximization fairness greedy multiplicative-weights",
    packages=find_packages(exclude=["tests"]),
    python_requires=">=3.8",
    install_requires=[
        "networkx>=2.5",
        "numpy>=1.20",
        "pandas>=1.2",
        "PyYAML>=5.3",
        "scipy>=1.7",
        "voluptuous>=0.12",
    ],
    entry_points={"console_scripts": ["momax=momax.cli:main"]},
    tests_require=["pytest"],
)
