#!/usr/bin/env python3
"""Setup script for the rmcca package."""

from setuptools import setup, find_packages

setup(
    name="rmcca",
    version="0.1.0",
    description="Multiple kernel and functional CCA for repeated-measures data",
    packages=find_packages(where=".", include=["rmcca*"]),
    package_dir={"": "."},
    python_requires=">=3.9",
    install_requires=[
        "numpy>=1.22",
        "scipy>=1.10",
        "pandas>=1.5",
        "pyyaml>=6.0",
        "matplotlib>=3.5",
    ],
    extras_require={"test": ["pytest>=7.0"]},
    entry_points={"console_scripts": ["rmcca=rmcca.cli:main"]},
)
