import setuptools

setuptools.setup(
    name='pcf',
    version='0.1',
    scripts=['pcf_tool.py'],
    author="Fabio Echegaray",
    author_email="fabio.echegaray@gmail.com",
    description="Exact-arithmetic p-adic continued fraction expansions "
                "(Browkin I and II, Ruban and two 3-step schemes) "
                "with checkers for their convergence conditions.",
    long_description_content_type="text/markdown",
    packages=setuptools.find_packages(exclude=['tests']),
    install_requires=[
        'sympy>=1.9',
        'numpy>=1.20',
        'pandas>=1.3',
        'enlighten>=1.10',
        ],
    extras_require={
        'test': ['pytest>=6.0', 'hypothesis>=6.0'],
        },
    entry_points={
        'console_scripts': ['pcf=pcf.cli:main'],
        },
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: AGPL-3.0",
        "Operating System :: OS Independent",
        ],
    )
