from setuptools import setup

setup(name='convg',
      version='0.1',
      description='Convergence spaces on finite carriers',
      license='MIT',
      packages=['convg'],
      package_data={'convg': ['data/*.json']},
      install_requires=['numpy', 'pandas', 'tqdm', 'matplotlib', 'networkx'],
      extras_require={'tests': ['pytest', 'hypothesis']},
      entry_points={'console_scripts': ['convg=convg.cli:main']},
      zip_safe=False)
