#!/usr/bin/env python
# -*- coding: utf-8 -*-
# emacs: -*- mode: python; py-indent-offset: 4; indent-tabs-mode: nil -*-
# vi: set ft=python sts=4 ts=4 sw=4 et:
""" ldp-trilemma setup script """


def main():
    """ Install entry-point """
    from setuptools import setup, find_packages
    from ldptrilemma.__about__ import (
        __version__,
        __author__,
        __email__,
        __license__,
        __description__,
        __longdesc__,
        __url__,
        __download__,
        PACKAGE_NAME,
        CLASSIFIERS,
        REQUIRES,
        SETUP_REQUIRES,
        LINKS_REQUIRES,
        TESTS_REQUIRES,
        EXTRA_REQUIRES,
    )

    pkg_data = {
        PACKAGE_NAME: [
            'VERSION',
            'data/*.cfg',
            'data/*.txt',
        ]
    }

    setup(
        name=PACKAGE_NAME,
        version=__version__,
        description=__description__,
        long_description=__longdesc__,
        author=__author__,
        author_email=__email__,
        license=__license__,
        maintainer_email=__email__,
        classifiers=CLASSIFIERS,
        # Dependencies handling
        python_requires='>=3.8',
        setup_requires=SETUP_REQUIRES,
        install_requires=REQUIRES,
        dependency_links=LINKS_REQUIRES,
        tests_require=TESTS_REQUIRES,
        extras_require=EXTRA_REQUIRES,
        url=__url__,
        download_url=__download__,
        entry_points={'console_scripts': [
            'ldp-trilemma=ldptrilemma.cli.run:main',
        ]},
        packages=find_packages(exclude=['*.tests']),
        package_data=pkg_data,
        zip_safe=False,
    )


if __name__ == '__main__':
    main()
