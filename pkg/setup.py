from setuptools import setup, find_packages

setup(
    name="fedsurv",
    version="1.0.0",
    description=("Federated random survival forests for sites with "
                 "partially overlapping covariates"),
    license="GNU GPL v2+",
    packages=find_packages(exclude=["tests", "tests.*"]),
    python_requires=">=3.8",
    install_requires=[
        "joblib>=1.1",
        "lxml>=4.6",
        "numpy>=1.20",
        "pandas>=1.3",
        "scipy>=1.7",
        "tabulate>=0.8",
        "tomli>=1.1; python_version < '3.11'"
    ],
    extras_require={
        "data": ["scikit-survival>=0.17"],
        "test": ["pytest>=6.0", "mock>=4.0", "scikit-survival>=0.17"]
    },
    entry_points={
        "console_scripts": ["fedsurv=fedsurv.cli:main"]
    }
)
