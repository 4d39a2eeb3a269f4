from pathlib import Path
from setuptools import find_packages, setup


setup(
    version="0.1.0",
    name="pyfareinspection",
    packages=find_packages(exclude=["tests"]),
    install_requires=["wheel", "numpy", "scipy", "networkx"],
    extras_require={"pandas": "pandas"},
    description="Fare inspection strategies for transit networks",
    long_description=Path("README.md").read_text(encoding="utf-8"),
    long_description_content_type='text/markdown',
    author="pyfareinspection developers",
    license="MIT",
    entry_points={
        "console_scripts": ["fareinspect = pyfareinspection.cli:main"],
    },
    classifiers=[
        "Intended Audience :: Science/Research",
        "Programming Language :: Python :: 3.8",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
)
