#!/usr/bin/env python
# -*- coding: utf-8 -*-

from setuptools import setup, find_packages

with open('README.rst') as readme_file:
    readme = readme_file.read()

with open('HISTORY.rst') as history_file:
    history = history_file.read()

requirements = [
    'flask',
    'click',
    'numpy',
    'scipy',
    'opencv-python-headless',
]

test_requirements = [
    'pytest',
]

setup(
    name='simtrack',
    version='0.1.0',
    description="Drone detection, tracking and identification from EO "
                "frames and passive RF captures",
    long_description=readme + '\n\n' + history,
    author="Michael Housh",
    author_email='mhoush@houshhomeenergy.com',
    url='https://github.com/m-housh/simtrack',
    packages=find_packages(exclude=['tests', 'tests.*']),
    include_package_data=True,
    install_requires=requirements,
    entry_points={
        'console_scripts': [
            'simtrack=simtrack.cli:main',
        ],
    },
    license="MIT license",
    zip_safe=False,
    keywords='simtrack rpca tdoa tracking rf-fingerprinting',
    classifiers=[
        'Development Status :: 2 - Pre-Alpha',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Natural Language :: English',
        'Programming Language :: Python :: 3 :: Only',
        'Programming Language :: Python :: 3.7',
        'Programming Language :: Python :: 3.8',
        'Topic :: Scientific/Engineering',
    ],
    python_requires='>=3.7',
    test_suite='tests',
    tests_require=test_requirements
)
