from setuptools import setup, find_packages, Command

def read_file(path):
    with open(path) as f:
        return f.read()

readme = read_file('README.rst')
_, rest = readme.split('.. pypi-start')
text, _ = rest.split('.. pypi-end')
long_description = text.replace('`', '').replace('**', '').replace('::', '')

class Unsupported(Command):
    user_options = []

    def initialize_options(self):
        pass

    def finalize_options(self):
        pass

    def run(self):
        print("Running 'test' with setup.py is not supported. "
              "Use 'pytest' to run the tests.")

PACKAGES = find_packages(where='.', exclude=['asrmoea.tests',
                                             'asrmoea.tests.*'])

setup(name='asrmoea',
      version=read_file('asrmoea/VERSION.txt').strip(),
      description='Black-box adversarial audio for speech recognizers '
                  'with multi-objective evolutionary algorithms',
      long_description=long_description,
      classifiers=[
          'Development Status :: 3 - Alpha',
          'License :: OSI Approved :: BSD License',
          'Operating System :: OS Independent',
          'Programming Language :: Python :: 3.8',
          'Programming Language :: Python :: 3.9',
          'Programming Language :: Python :: 3.10',
          'Programming Language :: Python :: 3.11',
          'Topic :: Multimedia :: Sound/Audio :: Speech',
          'Topic :: Scientific/Engineering :: Artificial Intelligence',
      ],
      keywords='adversarial audio speech recognition nsga-ii moga '
               'evolutionary multi-objective',
      license='BSD 3-Clause',
      packages=PACKAGES,
      include_package_data=True,
      package_data={'asrmoea': ['VERSION.txt']},
      python_requires='>=3.8',
      install_requires=read_file('requirements.txt').strip().split('\n'),
      entry_points={
          'console_scripts': ['asrmoea=asrmoea.cli:main'],
      },
      cmdclass={
          "test": Unsupported
      },
      zip_safe=False)
