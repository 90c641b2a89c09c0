# -*- coding: utf-8 -*-

from __future__ import absolute_import, division, print_function

from setuptools import find_packages, setup

requirements = ['numpy>=1.16',
                'scipy>=1.3',
                'plum-dispatch',
                'backends>=0.3',
                'tqdm']

setup(packages=find_packages(exclude=['docs', 'tests']),
      python_requires='>=3.8',
      install_requires=requirements,
      entry_points={'console_scripts': ['fareystat = fareystat.cli:main']},
      include_package_data=True)
