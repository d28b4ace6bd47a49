"""
Setup script for the intermediate β-shift toolkit
"""

from setuptools import find_packages, setup


def read_requirements(path: str = "requirements.txt"):
    """Runtime requirements, without the test tools"""
    with open(path, encoding="utf-8") as handle:
        lines = [line.strip() for line in handle]
    return [line for line in lines if line and not line.startswith("#") and not line.startswith("pytest")]


setup(
    name="betashift",
    version="1.0.0",
    description="Kneading invariants, admissibility and finite-type approximation of intermediate β-shifts",
    packages=find_packages(include=["betashift", "betashift.*", "models", "models.*"]),
    py_modules=["main"],
    python_requires=">=3.9",
    install_requires=read_requirements(),
    extras_require={"test": ["pytest>=7.4"]},
    entry_points={"console_scripts": ["betashift=betashift.cli:main"]},
)
