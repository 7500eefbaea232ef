from setuptools import setup, find_packages

about = {}
with open("locfit/__about__.py") as fh:
    exec(fh.read(), about)

setup(
    name=about["__title__"],
    version=about["__version__"],
    description=about["__summary__"],
    license=about["__license__"],
    packages=find_packages(exclude=["tests", "tests.*"]),
    python_requires=">=3.8",
    install_requires=[
        "numpy>=1.20",
        "networkx>=2.6",
    ],
    extras_require={
        "dev": ["pytest>=7.0", "hypothesis>=6.0"],
    },
    entry_points={
        'console_scripts': [
            'locfit = locfit:run_main',
        ],
    }
)
