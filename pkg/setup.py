"""
Setup script for the crflow conformal Ricci flow laboratory

© 2025-2030 All rights reserved Ashutosh Sinha
email: ajsinha@gmail.com
"""

from setuptools import setup, find_packages

# Read the README file
with open('README.md', 'r', encoding='utf-8') as f:
    long_description = f.read()

# Read requirements
with open('requirements.txt', 'r', encoding='utf-8') as f:
    requirements = [line.strip() for line in f
                    if line.strip() and not line.startswith('#') and not line.startswith('pytest')
                    and not line.startswith('hypothesis')]

setup(
    name='crflow',
    version='1.0.0',
    author='Ashutosh Sinha',
    author_email='ajsinha@gmail.com',
    description='Conformal Ricci flow on rotationally symmetric and homogeneous three-manifolds',
    long_description=long_description,
    long_description_content_type='text/markdown',
    packages=find_packages(exclude=['tests', 'tests.*', 'examples', 'examples.*']),
    classifiers=[
        'Development Status :: 4 - Beta',
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Mathematics',
        'Topic :: Scientific/Engineering :: Physics',
        'License :: Other/Proprietary License',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
        'Programming Language :: Python :: 3.12',
    ],
    python_requires='>=3.9',
    install_requires=requirements,
    extras_require={
        'test': ['pytest>=7.4', 'hypothesis>=6.90'],
    },
    include_package_data=True,
    package_data={
        'crflow': [
            'flowconfig/*.json',
            'flowconfig/*.properties',
        ],
    },
    entry_points={
        'console_scripts': [
            'crflow=crflow.cli:main',
        ],
    },
    keywords='ricci-flow conformal-flow differential-geometry finite-differences general-relativity',
)
