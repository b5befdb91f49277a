try:
    from setuptools import setup
    from setuptools import find_packages
    packages = find_packages(exclude=["tests", "tests.*"])
except ImportError:
    from distutils.core import setup
    import os
    packages = [x.strip('./').replace('/','.') for x in os.popen('find hdl -name "__init__.py" | xargs -n1 dirname').read().strip().split('\n')]

if bytes is str:
    raise Exception("This module is designed for python 3 only.")

setup(
    name='hdl',
    version='0.1.0',
    python_requires='>=3.8',
    packages=packages,
    install_requires=[
        'numpy',
        'scipy',
        'matplotlib',
        'PyYAML',
    ],
    extras_require={
        'test': ['pytest'],
    },
    entry_points={
        'console_scripts': ['hdl = hdl.__main__:main'],
    },
    description='Heatmap decoding lab: soft-argmax bias compensation, loss gradients and localized-heatmap theory.',
)
