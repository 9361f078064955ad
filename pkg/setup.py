from setuptools import setup, find_packages
import codecs
import os

here = os.path.abspath(os.path.dirname(__file__))

with codecs.open(os.path.join(here, "README.md"), encoding="utf-8") as fh:
    long_description = "\n" + fh.read()

VERSION = '0.2.0'
DESCRIPTION = 'Leafwise cohomology, small divisors and rigidity computations for locally free actions'
LONG_DESCRIPTION = 'Truncated Fourier solvers for cohomological equations over linear actions on tori, Diophantine diagnostics, Chevalley-Eilenberg cohomology, Mayer-Vietoris counts for suspensions and rotation-number analysis of commuting circle maps.'


setup(
    name="leafwise",
    version=VERSION,
    author="",
    author_email="",
    description=DESCRIPTION,
    long_description_content_type="text/markdown",
    long_description=long_description,
    packages=find_packages(exclude=['tests', 'tests.*', 'examples', 'examples.*']),
    package_data={'': ['*.yaml', '*.json']},    # This will include all yaml files in package
    python_requires='>=3.10',
    install_requires=[
        'numpy>=1.24',
        'scipy>=1.10',
        'pandas>=1.5',
        'pyyaml',
        'python-dotenv',
        'tinydb',
        'proglog',
        'pydantic>=2,<3',
    ],
    entry_points={
        'console_scripts': [
            'leafwise=leafwise.__main__:main',
        ],
    },
    keywords=['python', 'cohomological equation', 'small divisors', 'Diophantine approximation',
              'Lie algebra cohomology', 'foliations', 'rotation number', 'KAM', 'tinyDB'],
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Programming Language :: Python :: 3",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Operating System :: Unix",
        "Operating System :: MacOS :: MacOS X",
        "Operating System :: Microsoft :: Windows",
    ]
)
