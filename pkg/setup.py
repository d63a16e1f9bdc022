from setuptools import setup, find_packages

setup(
    name='pyDistOptCoord',
    version='0.1.0',
    packages=find_packages(exclude=['test', 'examples*']),
    install_requires=['numpy',
                      'matplotlib',
                      'scipy',
                      'h5py>=3.0',  # HDF5 backend of nexusformat
                      'nexusformat'],
    extras_require={
        'testing': ['flake8', 'pytest'],
        'documentation': ['sphinx', 'nbsphinx', 'sphinxcontrib-napoleon'],
    },
    license='MIT',
    author='the pyDistOptCoord developers',
    description='Distributed sub-optimal coordination of linear agents with '
                'sector-bounded input nonlinearities',
    long_description=open('README.md').read(),
    long_description_content_type='text/markdown',
    package_data={
        'pyDistOptCoord': ['*.conf', 'data/*.json']
    },
    entry_points={
        'console_scripts': ['doc-coord=pyDistOptCoord.cli:main'],
    },
    python_requires='>=3.7',
    keywords='multi-agent distributed optimization consensus LMI sector nonlinearity',
)
