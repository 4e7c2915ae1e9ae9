from setuptools import find_packages, setup

with open("README.md", encoding="utf-8") as readme_file:
    readme = readme_file.read()

with open("./requirements.txt") as req_file:
    requirements = [line.strip() for line in req_file if line.strip() and not line.startswith("#")]

setup(
    name='msfr-toolkit',
    version='0.1.0',
    python_requires=">=3.8",
    packages=find_packages(exclude=["examples", "examples.*"]),
    test_suite="msfr",
    description='Multi-study factor regression fitted by ECM, with AIC/BIC dimension selection, Bartlett and '
                'Thurstone factor scores, cross-validated prediction error and a replicated simulation benchmark',
    long_description=readme,
    long_description_content_type='text/markdown',
    keywords='factor analysis, multi-study, ECM, latent factors, covariates',
    classifiers=[
        'Programming Language :: Python :: 3',
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
    install_requires=requirements,
    entry_points={
        'console_scripts': ['msfr=msfr.scripts.cli:main'],
    },
    zip_safe=False,
)
