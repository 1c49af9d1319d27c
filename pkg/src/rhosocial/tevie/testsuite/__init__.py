# src/rhosocial/tevie/testsuite/__init__.py
"""Bundled test suite for rhosocial-tevie.

The suite ships inside the package so that an installed copy can be checked in
place (``pytest --pyargs rhosocial.tevie.testsuite``). Groups:

- ``feature``: per-module unit and property tests
- ``realworld``: acceptance runs against the cylinder series and the symbol
- ``benchmark``: scaling measurements of the FFT operator
"""
