import setuptools

with open("README.md", "r") as fh:
    long_description = fh.read()

setuptools.setup(
    name="autothermo",
    version="1.0.0.dev",
    author="autothermo authors",
    description=(
        "Thermodynamic ledgers and second-law audits "
        "for autonomous finite-dimensional quantum systems"
    ),
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=setuptools.find_packages(exclude=["tests", "examples", "examples.*"]),
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: GNU General Public License v2 or later (GPLv2+)",
        "Operating System :: OS Independent",
        "Development Status :: 2 - Pre-Alpha",
        "Topic :: Scientific/Engineering :: Physics",
    ],
    python_requires=">=3.8",
    install_requires=["numpy", "scipy", "pandas", "PyYAML"],
    extras_require={"dev": ["pytest", "pytest-datadir", "black", "flake8", "pylint"]},
    entry_points={"console_scripts": ["autothermo=autothermo.app:main"]},
)
